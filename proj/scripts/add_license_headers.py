import pathlib, sys
HEADER = """// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0
"""
root = pathlib.Path(sys.argv[1])
n = 0
for d in ["core", "tools", "tests", "benchmarks"]:
    for p in sorted((root / d).rglob("*")):
        if p.suffix not in (".hpp", ".cpp") and not p.name.endswith(".cpp.in"):
            continue
        text = p.read_text()
        if "SPDX-License-Identifier" in text.split("\n", 3)[1] if text.count("\n") > 1 else False:
            continue
        p.write_text(HEADER + "\n" + text)
        n += 1
print(n, "files")

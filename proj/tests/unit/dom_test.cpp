// Copyright 2026 The teachflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not
// use this file except in compliance with the License. You may obtain a copy
// at http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "perturb.hpp"
#include "teachflow/dom/label.hpp"
#include "teachflow/dom/query.hpp"
#include "teachflow/dom/selector.hpp"
#include "teachflow/dom/snapshot.hpp"
#include "teachflow/error.hpp"

namespace teachflow {
namespace {

using dom::parse_snapshot;
using testing::fixture;
using testing::read_text;

std::size_t element_count(const dom::DomSnapshot& s) { return s.elements().size(); }

std::string find_by_id(const dom::DomSnapshot& s, const std::string& id) {
  auto hits = dom::Query::parse("#" + id).select(s, 0);
  EXPECT_EQ(hits.size(), 1u) << id;
  return hits.empty() ? std::string{} : s.node(hits.front()).nodeId;
}

dom::DomSnapshot recruitment_page() {
  return parse_snapshot(read_text(fixture("hr/ready-to-go/snapshots/recruitment-1a0c2269.html")), "recruitment");
}

TEST(Snapshot, ParsesNestedInput) {
  auto s = parse_snapshot("<div><input id='a'></div>");
  EXPECT_EQ(element_count(s), 2u);
  EXPECT_EQ(s.root().nodeId, "/");
  EXPECT_EQ(s.node(s.elements()[1]).tag, "input");
}

TEST(Snapshot, EmptyInputIsUnparseable) {
  try {
    parse_snapshot("");
    FAIL() << "expected UnparseableInput";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnparseableInput);
  }
}

TEST(Snapshot, HrSearchPageHasSearchField) {
  auto s = recruitment_page();
  const auto id = find_by_id(s, "search");
  const auto& n = s.node(s.index_of(id));
  EXPECT_EQ(n.tag, "input");
  ASSERT_NE(n.attr("name"), nullptr);
  EXPECT_EQ(*n.attr("name"), "candidate");
}

TEST(Snapshot, StructuralIdsFollowElementSiblings) {
  auto s = parse_snapshot("<div><p>a</p><span>b</span></div><div><em></em><b></b><span id=t></span></div>");
  auto i = s.index_of(find_by_id(s, "t"));
  auto path = s.node(i).nodeId;
  // html/body wrappers come first; the target is the third child of the second div.
  EXPECT_TRUE(path.size() >= 4 && path.substr(path.size() - 4) == "/1/2") << path;
}

TEST(Snapshot, RepairsImpliedEndTags) {
  auto s = parse_snapshot("<ul><li>one<li>two</ul><p>x<p>y");
  EXPECT_EQ(dom::Query::parse("li").select(s, 0).size(), 2u);
  EXPECT_EQ(dom::Query::parse("p").select(s, 0).size(), 2u);
  EXPECT_EQ(dom::Query::parse("li li").select(s, 0).size(), 0u);
}

TEST(Snapshot, SerializeRoundTripsStructure) {
  auto s = recruitment_page();
  auto again = parse_snapshot(dom::serialize(s, 0));
  ASSERT_EQ(again.nodes().size(), s.nodes().size());
  for (std::size_t i = 0; i < s.nodes().size(); ++i) {
    EXPECT_EQ(again.node(i).nodeId, s.node(i).nodeId);
    EXPECT_EQ(again.node(i).tag, s.node(i).tag);
    EXPECT_EQ(again.node(i).textContent, s.node(i).textContent);
  }
}

TEST(Snapshot, DeclarativeShadowRootOpensScope) {
  auto s = parse_snapshot(
      "<div id=host><template shadowrootmode=open><input id=inner></template></div><input id=outer>");
  EXPECT_TRUE(dom::Query::parse("#inner").select(s, 0).empty());
  EXPECT_EQ(dom::Query::parse("#outer").select(s, 0).size(), 1u);
  auto all = s.elements();
  auto inner = std::find_if(all.begin(), all.end(), [&](auto i) {
    const auto* id = s.node(i).attr("id");
    return id && *id == "inner";
  });
  ASSERT_NE(inner, all.end());
  EXPECT_FALSE(s.node(*inner).scopeId.empty());
}

TEST(Query, SupportsAttributeOperatorsAndCombinators) {
  auto s = parse_snapshot(
      "<form class='a b'><input name=user data-x=prefix-mid-suffix><div><span class=b>t</span></div></form>");
  EXPECT_EQ(dom::Query::parse("form.b > input[name=user]").select(s, 0).size(), 1u);
  EXPECT_EQ(dom::Query::parse("[data-x^=prefix]").select(s, 0).size(), 1u);
  EXPECT_EQ(dom::Query::parse("[data-x$=suffix]").select(s, 0).size(), 1u);
  EXPECT_EQ(dom::Query::parse("[data-x*=mid]").select(s, 0).size(), 1u);
  EXPECT_EQ(dom::Query::parse("form > span").select(s, 0).size(), 0u);
  EXPECT_EQ(dom::Query::parse("form span, input").select(s, 0).size(), 2u);
}

TEST(Query, RejectsMalformedSelectors) {
  for (const char* bad : {"", "[", "a >", "#", "div[x=", ",a"}) {
    try {
      dom::Query::parse(bad);
      ADD_FAILURE() << "accepted " << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InvalidQuery) << bad;
    }
  }
}

TEST(Selector, IdStrategyComesFirst) {
  auto s = recruitment_page();
  auto spec = dom::generate_selector(s, find_by_id(s, "search"));
  ASSERT_FALSE(spec.candidates.empty());
  EXPECT_EQ(spec.candidates.front(), dom::Strategy(dom::ById{"search"}));
  EXPECT_TRUE(std::holds_alternative<dom::ByPath>(spec.candidates.back()));
}

TEST(Selector, LabelAnchorForLabelledInput) {
  auto s = recruitment_page();
  const auto id = find_by_id(s, "search");
  auto spec = dom::generate_selector(s, id);
  const dom::Strategy want = dom::ByLabelAnchor{"Candidate Name", "input"};
  EXPECT_NE(std::find(spec.candidates.begin(), spec.candidates.end(), want), spec.candidates.end());
  auto only_label = spec;
  only_label.candidates = {want};
  EXPECT_EQ(dom::resolve_selector(s, only_label), id);
}

TEST(Selector, UnlabelledSpanGetsPathOnly) {
  // Five elements: two divs under a wrapper plus three spans in the second.
  auto s = parse_snapshot("<div><div></div><div><span></span><span></span><span></span></div></div>");
  auto spans = dom::Query::parse("div > div > span").select(s, 0);
  ASSERT_EQ(spans.size(), 3u);
  const auto& target = s.node(spans[2]);
  auto spec = dom::generate_selector(s, target.nodeId);
  ASSERT_EQ(spec.candidates.size(), 1u);
  auto* path = std::get_if<dom::ByPath>(&spec.candidates.front());
  ASSERT_NE(path, nullptr);
  // Oracle: walk parents and record element-sibling positions.
  std::vector<int> expected;
  for (auto i = spans[2]; s.node(i).parent; i = *s.node(i).parent) {
    auto sibs = s.element_children(*s.node(i).parent);
    expected.insert(expected.begin(), static_cast<int>(std::find(sibs.begin(), sibs.end(), i) - sibs.begin()));
  }
  EXPECT_EQ(path->path, expected);
  EXPECT_EQ(std::vector<int>(path->path.end() - 2, path->path.end()), (std::vector<int>{1, 2}));
}

TEST(Selector, RoundTripsEveryFixtureElement) {
  std::size_t checked = 0;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(testing::fixture_dir())) {
    if (entry.path().extension() != ".html") continue;
    auto s = parse_snapshot(read_text(entry.path()));
    for (auto i : s.elements()) {
      const auto& id = s.node(i).nodeId;
      EXPECT_EQ(dom::resolve_selector(s, dom::generate_selector(s, id)), id) << entry.path() << " " << id;
      ++checked;
    }
  }
  EXPECT_GT(checked, 500u);
}

TEST(Selector, MissingTargetIsElementNotFound) {
  auto s = parse_snapshot("<div><input id=a><input id=b></div>");
  auto spec = dom::generate_selector(s, find_by_id(s, "b"));
  auto gone = parse_snapshot("<p>nothing here</p>");
  try {
    dom::resolve_selector(gone, spec);
    FAIL() << "expected ElementNotFound";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ElementNotFound);
  }
}

TEST(Selector, AmbiguousCandidateFallsThrough) {
  auto s = parse_snapshot("<div><input name=q><input name=q id=z></div>");
  dom::SelectorSpec spec;
  spec.candidates = {dom::ByName{"q"}, dom::ById{"z"}};
  EXPECT_EQ(dom::resolve_selector(s, spec), find_by_id(s, "z"));
  spec.candidates = {dom::ByName{"q"}};
  try {
    dom::resolve_selector(s, spec);
    FAIL() << "expected AmbiguousMatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AmbiguousMatch);
  }
}

TEST(Selector, SurvivesInsertedSiblingAndAttributeReorder) {
  auto s = recruitment_page();
  const auto id = find_by_id(s, "search");
  const auto spec = dom::generate_selector(s, id);
  const auto target = s.index_of(id);
  for (auto kind : {testing::Perturbation::ReorderAttributes, testing::Perturbation::InsertSiblingBefore}) {
    auto html = testing::perturb(s, target, kind);
    ASSERT_TRUE(html);
    auto changed = parse_snapshot(*html);
    EXPECT_EQ(dom::resolve_selector(changed, spec), testing::perturbed_node_id(s, changed, target, kind));
  }
}

TEST(Selector, ScopeHopReachesShadowContent) {
  auto s = parse_snapshot(
      "<my-card id=card><template shadowrootmode=open><button>Go</button></template></my-card>"
      "<button>Go</button>");
  auto all = s.elements();
  auto inner = std::find_if(all.begin(), all.end(),
                            [&](auto i) { return s.node(i).tag == "button" && !s.node(i).scopeId.empty(); });
  ASSERT_NE(inner, all.end());
  auto spec = dom::generate_selector(s, s.node(*inner).nodeId);
  EXPECT_FALSE(spec.scopeHops.empty());
  EXPECT_EQ(dom::resolve_selector(s, spec), s.node(*inner).nodeId);
}

TEST(Selector, JsonRoundTrip) {
  auto s = recruitment_page();
  auto spec = dom::generate_selector(s, find_by_id(s, "search"));
  nlohmann::json j = spec;
  EXPECT_EQ(j.get<dom::SelectorSpec>(), spec);
}

TEST(Label, ExplicitLabelFor) {
  auto s = parse_snapshot("<label for=\"x\">Keywords</label><input id=\"x\">");
  auto l = dom::associate_label(s, s.index_of(find_by_id(s, "x")));
  EXPECT_EQ(l.text, "Keywords");
  EXPECT_EQ(l.source, dom::LabelSource::LabelFor);
}

TEST(Label, PlaceholderWithoutLabel) {
  auto s = parse_snapshot("<div><input id=q placeholder=\"Type for hints...\"></div>");
  EXPECT_EQ(dom::associate_label(s, find_by_id(s, "q")), "Type for hints...");
}

TEST(Label, BareButtonUsesOwnText) {
  auto s = parse_snapshot("<p>Find people</p><button id=b>Search</button>");
  auto l = dom::associate_label(s, s.index_of(find_by_id(s, "b")));
  EXPECT_EQ(l.text, "Search");
  EXPECT_EQ(l.source, dom::LabelSource::OwnText);
}

TEST(Label, AriaBeatsPlaceholder) {
  auto s = parse_snapshot("<input id=q aria-label=Query placeholder=hint>");
  EXPECT_EQ(dom::associate_label(s, find_by_id(s, "q")), "Query");
}

TEST(Label, ProximityForFormControls) {
  auto s = parse_snapshot("<div><span>City</span><input id=c></div>");
  auto l = dom::associate_label(s, s.index_of(find_by_id(s, "c")));
  EXPECT_EQ(l.text, "City");
  EXPECT_EQ(l.source, dom::LabelSource::Proximity);
}

TEST(Label, EmptyDecorativeElementFallsBack) {
  auto s = parse_snapshot("<div><span>City</span><div id=d></div></div>");
  auto l = dom::associate_label(s, s.index_of(find_by_id(s, "d")));
  EXPECT_EQ(l.source, dom::LabelSource::Fallback);
  EXPECT_EQ(l.text, "div element");
}

TEST(Label, TotalAndDeterministicOnFixtures) {
  auto s = recruitment_page();
  for (auto i : s.elements()) {
    auto a = dom::associate_label(s, i);
    auto b = dom::associate_label(s, i);
    EXPECT_FALSE(a.text.empty());
    EXPECT_EQ(a.text, b.text);
  }
}

}  // namespace
}  // namespace teachflow

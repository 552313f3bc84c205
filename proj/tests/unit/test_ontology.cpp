#include <string>

#include "doctest.h"
#include "fixtures.hpp"
#include "scenelint/errors.hpp"
#include "scenelint/ontology.hpp"

using namespace scenelint;

namespace {

std::string field_of(const std::string& json) {
  try {
    parse_ontology(json);
  } catch (const ValidationError& e) {
    return e.field();
  }
  return "<none>";
}

const char* kDim = R"({"p5": 1, "p25": 1.2, "median": 1.4, "p75": 1.6, "p95": 1.8, "mean": 1.4, "std": 0.2, "n": 10})";

}  // namespace

TEST_SUITE("ontology") {
  TEST_CASE("serialize and parse round trip") {
    const Ontology& o = fixtures::ontology();
    const std::string text = serialize_ontology(o);
    const Ontology back = parse_ontology(text);
    CHECK(back == o);
    CHECK(serialize_ontology(back) == text);
  }

  TEST_CASE("keys are canonicalized on load") {
    const Ontology o = parse_ontology(std::string(R"({"categories": {" Bed ": {"dimension": {"width": )") + kDim +
                                      R"(}, "cooccurrence": {"NightStand": {"count": 3, "p_b_given_a": 0.5, "npmi": 0.2}}}}})");
    REQUIRE(o.find("bed") != nullptr);
    CHECK(o.find("BED") != nullptr);
    CHECK(o.find("bed")->find_edge("nightstand") != nullptr);
    CHECK(o.meta_json == "{}");
  }

  TEST_CASE("cooccurrence lists are sorted by count then name") {
    const Ontology o = parse_ontology(R"({"categories": {"a": {"cooccurrence": {
      "z": {"count": 2, "p_b_given_a": 0.2, "npmi": 0.1},
      "b": {"count": 5, "p_b_given_a": 0.5, "npmi": 0.1},
      "c": {"count": 2, "p_b_given_a": 0.2, "npmi": 0.1}}}}})");
    const auto& list = o.find("a")->cooccurrence;
    REQUIRE(list.size() == 3);
    CHECK(list[0].first == "b");
    CHECK(list[1].first == "c");
    CHECK(list[2].first == "z");
  }

  TEST_CASE("sort_and_cap truncates") {
    CooccurList list;
    for (int i = 0; i < 60; ++i) list.emplace_back("c" + std::to_string(100 + i), CooccurEdge{i + 1, 0.5, 0.0});
    sort_and_cap(list);
    CHECK(list.size() == kCooccurCap);
    CHECK(list.front().second.count == 60);
    CHECK(list.back().second.count == 11);
  }

  TEST_CASE("validation errors point into the document") {
    CHECK(field_of(R"({"categories": {"a": {"cooccurrence": {"b": {"count": 0, "p_b_given_a": 0.5, "npmi": 0}}}}})") ==
          "categories.a.cooccurrence.b.count");
    CHECK(field_of(R"({"categories": {"a": {"cooccurrence": {"b": {"count": 1, "p_b_given_a": 0, "npmi": 0}}}}})") ==
          "categories.a.cooccurrence.b.p_b_given_a");
    CHECK(field_of(R"({"categories": {"a": {"cooccurrence": {"b": {"count": 1, "p_b_given_a": 0.5, "npmi": 1.5}}}}})") ==
          "categories.a.cooccurrence.b.npmi");
    CHECK(field_of(R"({"categories": {"a": {"room_association": {"x": {"count": 1, "fraction": 0.7},
      "y": {"count": 1, "fraction": 0.6}}}}})") == "categories.a.room_association");
    CHECK(field_of(R"({"categories": {"a": {"orientation": {"back_to_wall": {"fraction": 0.5,
      "mean_angle_deg": 190, "n": 3}}}}})") == "categories.a.orientation.back_to_wall.mean_angle_deg");
    CHECK(field_of(R"({"categories": {"a": {"dimension": {"width": {"p5": 2, "p25": 1, "median": 1, "p75": 1,
      "p95": 1, "mean": 1, "std": 0, "n": 1}}}}})") == "categories.a.dimension.width");
    CHECK(field_of(R"({"categories": {"A": {}, "a": {}}})") == "categories.a");
  }

  TEST_CASE("too many cooccurrence entries are rejected") {
    std::string json = R"({"categories": {"a": {"cooccurrence": {)";
    for (int i = 0; i < 51; ++i) {
      if (i) json += ",";
      json += "\"c" + std::to_string(i) + "\": {\"count\": 1, \"p_b_given_a\": 0.1, \"npmi\": 0}";
    }
    json += "}}}}";
    CHECK(field_of(json) == "categories.a.cooccurrence");
  }

  TEST_CASE("cooccur_fraction takes the larger conditional and prefers room tables") {
    const Ontology& o = fixtures::ontology();
    // bed->nightstand 0.8, nightstand->bed 0.6
    CHECK(cooccur_fraction(o, "bed", "nightstand") == 0.8);
    CHECK(cooccur_fraction(o, "nightstand", "bed") == 0.8);
    // bedroom table exists for bed: 0.85 there; nightstand has no bedroom table.
    CHECK(cooccur_fraction(o, "bed", "nightstand", "bedroom") == 0.85);
    // bed's bedroom table lists lamp; the global bed list does not.
    CHECK(cooccur_fraction(o, "bed", "lamp") == 0.0);
    CHECK(cooccur_fraction(o, "bed", "lamp", "Bedroom") == 0.4);
    // Room without tables falls back to global edges.
    CHECK(cooccur_fraction(o, "bed", "nightstand", "office") == 0.8);
    // Room tables replace global ones: wardrobe is only in bed's global list.
    CHECK(cooccur_fraction(o, "bed", "wardrobe", "bedroom") == 0.0);
    CHECK(cooccur_fraction(o, "plant", "bed") == 0.0);
  }

  TEST_CASE("orientation checks apply at or above the applicability fraction") {
    const Ontology& o = fixtures::ontology();
    EvalParams p;
    OrientationChecks c = orientation_checks_for(o, "sofa", p);
    CHECK(c.back_to_wall);
    CHECK(c.faces_center);
    CHECK(c.faces_pair == std::vector<std::string>{"tv_stand"});
    c = orientation_checks_for(o, "chair", p);
    CHECK_FALSE(c.back_to_wall);
    CHECK_FALSE(c.faces_center);
    CHECK(c.faces_pair == std::vector<std::string>{"desk", "table"});
    p.applicability_fraction = 0.6;
    CHECK(orientation_checks_for(o, "chair", p).faces_pair == std::vector<std::string>{"desk"});
    c = orientation_checks_for(o, "sofa", p);
    CHECK_FALSE(c.back_to_wall);
    CHECK_FALSE(c.faces_center);
    CHECK(c.faces_pair == std::vector<std::string>{"tv_stand"});
    CHECK(orientation_checks_for(o, "plant", p).empty());
  }

  TEST_CASE("meta is preserved") {
    const Ontology o = parse_ontology(R"({"categories": {}, "meta": {"builder": "x", "scenes": 3}})");
    CHECK(o.meta_json == R"({"builder":"x","scenes":3})");
    CHECK(parse_ontology(serialize_ontology(o)) == o);
  }
}

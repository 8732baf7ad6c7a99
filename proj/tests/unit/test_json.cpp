#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "cutfn/construct.hpp"
#include "cutfn/error.hpp"
#include "cutfn/json_io.hpp"
#include "cutfn/limit.hpp"
#include "cutfn/verify.hpp"

#include "support.hpp"

using cutfn::dump_json;
using cutfn::EpsilonSchedule;
using cutfn::Error;
using cutfn::function_from_json;
using cutfn::ojson;
using cutfn::schedule_from_json;
using cutfn::PwlFunction;
using cutfn::Rational;
using testsupport::R;
using testsupport::standard_schedule;

namespace {

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {}
  ~TempFile() { std::remove(path.string().c_str()); }
};

}  // namespace

TEST_CASE("function serialization round trip") {
  PwlFunction f = cutfn::build(standard_schedule(), 3);
  ojson j = function_to_json(f);
  PwlFunction g = function_from_json(j);
  CHECK(f == g);
  CHECK(dump_json(function_to_json(g)) == dump_json(j));
  std::string text = dump_json(j);
  CHECK(text.back() == '\n');
  CHECK(text.find("\"breakpoints\"") < text.find("\"values\""));
}

TEST_CASE("function schema is strict") {
  ojson good = {{"breakpoints", {"0", "1/2", "1"}}, {"values", {"0", "1", "0"}}};
  CHECK_NOTHROW((void)function_from_json(good));

  ojson extra = good;
  extra["comment"] = "hi";
  CHECK_THROWS_AS((void)function_from_json(extra), Error);

  ojson missing = {{"breakpoints", {"0", "1"}}};
  CHECK_THROWS_AS((void)function_from_json(missing), Error);

  ojson numbers = {{"breakpoints", {0, 0.5, 1}}, {"values", {"0", "1", "0"}}};
  CHECK_THROWS_AS((void)function_from_json(numbers), Error);

  ojson bad = good;
  bad["values"][1] = "2/4";
  try {
    (void)function_from_json(bad);
    FAIL("expected throw");
  } catch (const Error& e) {
    std::string msg = e.what();
    CHECK(msg.find("values[1]") != std::string::npos);
    CHECK(msg.find("2/4") != std::string::npos);
  }

  ojson not_object = ojson::array();
  CHECK_THROWS_AS((void)function_from_json(not_object), Error);
}

TEST_CASE("schedule serialization") {
  EpsilonSchedule s = standard_schedule();
  ojson j = schedule_to_json(s);
  CHECK(j["kind"] == "geometric");
  CHECK(j["alpha"] == "1/2");
  CHECK(j["base"] == "1/2");
  CHECK(j["ratio"] == "1/4");
  EpsilonSchedule back = schedule_from_json(j);
  CHECK(back.kind() == EpsilonSchedule::Kind::Geometric);
  CHECK(back.alpha() == s.alpha());
  CHECK(back.base() == s.base());
  CHECK(back.ratio() == s.ratio());

  EpsilonSchedule e =
      EpsilonSchedule::explicit_list(R("1/2"), {R("1/8"), R("1/32")});
  ojson je = schedule_to_json(e);
  CHECK(je["kind"] == "explicit");
  EpsilonSchedule eback = schedule_from_json(je);
  CHECK(eback.kind() == EpsilonSchedule::Kind::Explicit);
  CHECK(eback.epsilons() == e.epsilons());

  ojson bad = {{"alpha", "1/2"}, {"kind", "fancy"}};
  CHECK_THROWS_AS((void)schedule_from_json(bad), Error);
  ojson mixed = {{"alpha", "1/2"},
                 {"kind", "geometric"},
                 {"base", "1/2"},
                 {"ratio", "1/4"},
                 {"epsilons", {"1/8"}}};
  CHECK_THROWS_AS((void)schedule_from_json(mixed), Error);
  // invalid parameters are rejected by the schedule itself
  ojson invalid = {{"alpha", "1/2"}, {"kind", "geometric"}, {"base", "1/2"},
                   {"ratio", "1/2"}};
  CHECK_THROWS_AS((void)schedule_from_json(invalid), Error);
}

TEST_CASE("report serialization") {
  cutfn::VerificationReport r =
      cutfn::check_subadditive(cutfn::build(standard_schedule(), 1), {});
  ojson j = report_to_json(r);
  CHECK(j["property"] == "subadditive");
  CHECK(j["holds"] == true);
  CHECK(j["summary"]["min_delta"] == "0");
  REQUIRE(j["witnesses"].is_array());
  REQUIRE(!j["witnesses"].empty());
  const auto& w = j["witnesses"][0];
  CHECK(w["kind"] == "subadditivity-pair");
  CHECK(w.contains("label"));
  CHECK(w["data"].is_array());
  CHECK(w.contains("lhs"));
  CHECK(w.contains("rhs"));

  std::string once = dump_json(j);
  std::string twice = dump_json(report_to_json(cutfn::check_subadditive(
      cutfn::build(standard_schedule(), 1), {})));
  CHECK(once == twice);
}

TEST_CASE("evaluation serialization") {
  EpsilonSchedule s = standard_schedule();
  ojson ex = evaluation_to_json(cutfn::eval_limit(s, R("3/16"), R("1/8")));
  CHECK(ex["mode"] == "exact");
  CHECK(ex["point"] == "3/16");
  CHECK(ex["value"] == "5/8");
  CHECK(ex["segment_index"] == 1);
  CHECK(ex["depth"] == 1);
  CHECK(!ex.contains("lower"));

  ojson en = evaluation_to_json(
      cutfn::eval_limit(s, R("1/3"), R("1/1000000")));
  CHECK(en["mode"] == "enclosure");
  CHECK(en.contains("lower"));
  CHECK(en.contains("upper"));
  CHECK(!en.contains("value"));
  CHECK(Rational::parse(en["lower"].get<std::string>()) <=
        Rational::parse(en["upper"].get<std::string>()));
}

TEST_CASE("property and witness kind names") {
  CHECK(std::string(property_name(cutfn::Property::TwoSlopeFacet)) ==
        "two-slope-facet");
  CHECK(std::string(property_name(cutfn::Property::NonPiecewiseLinear)) ==
        "non-piecewise-linear");
  CHECK(std::string(witness_kind_name(cutfn::WitnessKind::ChainLink)) ==
        "chain-link");
  CHECK(std::string(witness_kind_name(
            cutfn::WitnessKind::DecompositionPoint)) == "decomposition-point");
}

TEST_CASE("file loading") {
  TempFile good("cutfn_test_fn.json");
  cutfn::write_text(good.path,
                    dump_json(function_to_json(cutfn::gmi(R("1/2")))));
  PwlFunction f = cutfn::load_function(good.path);
  CHECK(f == cutfn::gmi(R("1/2")));

  TempFile sched("cutfn_test_sched.json");
  cutfn::write_text(sched.path, dump_json(schedule_to_json(standard_schedule())));
  EpsilonSchedule s = cutfn::load_schedule(sched.path);
  CHECK(s.alpha() == R("1/2"));

  CHECK_THROWS_AS((void)cutfn::load_function("/nonexistent/f.json"), Error);

  TempFile mangled("cutfn_test_bad.json");
  cutfn::write_text(mangled.path, "{ not json");
  try {
    (void)cutfn::load_function(mangled.path);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("parse") != std::string::npos);
  }
}

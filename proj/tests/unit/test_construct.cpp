#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cutfn/construct.hpp"
#include "cutfn/error.hpp"

#include "support.hpp"

using cutfn::EpsilonSchedule;
using cutfn::Error;
using cutfn::PwlFunction;
using cutfn::Rational;
using testsupport::make_fn;
using testsupport::R;
using testsupport::standard_schedule;
using testsupport::step_oracle;

TEST_CASE("geometric schedule validation") {
  CHECK_NOTHROW(standard_schedule());
  CHECK_THROWS_AS(EpsilonSchedule::geometric(R("1/2"), R("1/2"), R("1/2")),
                  Error);
  CHECK_THROWS_AS(EpsilonSchedule::geometric(R("1/2"), R("1/2"), R("0")),
                  Error);
  CHECK_THROWS_AS(EpsilonSchedule::geometric(R("1/2"), R("0"), R("1/4")),
                  Error);
  // tail 2/5 >= alpha 1/4
  CHECK_THROWS_AS(EpsilonSchedule::geometric(R("1/4"), R("4/5"), R("1/4")),
                  Error);
  // eps_1 = 3/5 > 1 - alpha = 1/5
  CHECK_THROWS_AS(EpsilonSchedule::geometric(R("4/5"), R("12/5"), R("1/4")),
                  Error);
  CHECK_THROWS_AS(EpsilonSchedule::geometric(R("0"), R("1/2"), R("1/4")),
                  Error);
  CHECK_THROWS_AS(EpsilonSchedule::geometric(R("1"), R("1/2"), R("1/4")),
                  Error);
}

TEST_CASE("explicit schedule validation") {
  CHECK_NOTHROW(
      EpsilonSchedule::explicit_list(R("1/2"), {R("1/8"), R("1/32")}));
  // Empty list is the depth-0-only schedule; reducing a one-step schedule
  // produces it, so it has to stay legal.
  EpsilonSchedule depth0 = EpsilonSchedule::explicit_list(R("1/2"), {});
  CHECK(depth0.max_depth() == std::size_t{0});
  CHECK_THROWS_AS(EpsilonSchedule::explicit_list(R("1/2"), {R("0")}), Error);
  // increasing
  CHECK_THROWS_AS(
      EpsilonSchedule::explicit_list(R("1/2"), {R("1/32"), R("1/8")}), Error);
  // weighted prefix sum reaches alpha: 1/4 + 2*1/8 = 1/2
  CHECK_THROWS_AS(
      EpsilonSchedule::explicit_list(R("1/2"), {R("1/4"), R("1/8")}), Error);
  // eps_1 beyond 1 - alpha
  CHECK_THROWS_AS(EpsilonSchedule::explicit_list(R("4/5"), {R("1/4")}),
                  Error);
}

TEST_CASE("epsilon and gamma accessors") {
  EpsilonSchedule s = standard_schedule();
  CHECK(s.epsilon(1) == R("1/8"));
  CHECK(s.epsilon(2) == R("1/32"));
  CHECK(s.epsilon(3) == R("1/128"));
  CHECK_THROWS_AS((void)s.epsilon(0), Error);
  CHECK(s.gamma(0) == R("1/2"));
  CHECK(s.gamma(1) == R("3/8"));
  CHECK(s.gamma(2) == R("5/16"));
  CHECK(!s.max_depth().has_value());

  EpsilonSchedule e =
      EpsilonSchedule::explicit_list(R("1/2"), {R("1/8"), R("1/32")});
  CHECK(e.epsilon(2) == R("1/32"));
  CHECK_THROWS_AS((void)e.epsilon(3), Error);
  REQUIRE(e.max_depth().has_value());
  CHECK(*e.max_depth() == 2);
  CHECK(!e.has_tail());
  CHECK(s.has_tail());
  CHECK(s.tail_sum() == R("1/4"));
}

TEST_CASE("gmi shape") {
  PwlFunction f = cutfn::gmi(R("1/2"));
  CHECK(f.breakpoints() == std::vector<Rational>{R("0"), R("1/2"), R("1")});
  CHECK(f.values() == std::vector<Rational>{R("0"), R("1"), R("0")});
  REQUIRE(f.has_tags());
  CHECK(f.tags()[0].sign == cutfn::PieceSign::Positive);
  CHECK(f.tags()[1].sign == cutfn::PieceSign::Negative);
  CHECK(f.tags()[1].index == 0);
  CHECK_THROWS_AS((void)cutfn::gmi(R("0")), Error);
  CHECK_THROWS_AS((void)cutfn::gmi(R("1")), Error);
}

TEST_CASE("step matches the worked example") {
  PwlFunction f = cutfn::step(cutfn::gmi(R("1/2")), R("1/2"), R("1/8"));
  CHECK(f.breakpoints() == std::vector<Rational>{R("0"), R("3/16"), R("5/16"),
                                                 R("1/2"), R("1")});
  CHECK(f.values() ==
        std::vector<Rational>{R("0"), R("5/8"), R("3/8"), R("1"), R("0")});
}

TEST_CASE("step agrees with the transcription oracle") {
  EpsilonSchedule s = standard_schedule();
  PwlFunction f = cutfn::gmi(s.alpha());
  PwlFunction oracle = f;
  for (std::size_t i = 1; i <= 6; ++i) {
    f = cutfn::step(f, s.alpha(), s.epsilon(i));
    oracle = step_oracle(oracle, s.alpha(), s.epsilon(i));
    CAPTURE(i);
    CHECK(f == oracle);
  }

  PwlFunction g = cutfn::gmi(R("2/7"));
  PwlFunction h = cutfn::step(g, R("2/7"), R("1/14"));
  CHECK(h == step_oracle(g, R("2/7"), R("1/14")));
}

TEST_CASE("step splits every positive piece of the depth-2 example") {
  PwlFunction f = cutfn::build(standard_schedule(), 2);
  CHECK(f.eval(R("5/64")) == R("11/32"));
  CHECK(f.eval(R("7/64")) == R("9/32"));
  CHECK(f.eval(R("25/64")) == R("23/32"));
  CHECK(f.eval(R("27/64")) == R("21/32"));
  // positive pieces all have length gamma_2 / 4 = 5/64
  for (std::size_t k = 0; k < f.piece_count(); ++k)
    if (f.piece_slope(k).sign() > 0)
      CHECK(f.breakpoints()[k + 1] - f.breakpoints()[k] == R("5/64"));
}

TEST_CASE("step refuses a replacement that does not fit") {
  PwlFunction f = make_fn({"0", "1/100", "1/2", "1"}, {"0", "1", "1", "0"});
  CHECK_THROWS_AS((void)cutfn::step(f, R("1/2"), R("1/8")), Error);
}

TEST_CASE("step on untagged input seeds tags by slope sign") {
  PwlFunction f = make_fn({"0", "1/2", "1"}, {"0", "1", "0"});
  CHECK(!f.has_tags());
  PwlFunction g = cutfn::step(f, R("1/2"), R("1/8"));
  REQUIRE(g.has_tags());
  CHECK(g == cutfn::build(standard_schedule(), 1));
  CHECK(g.tags()[1].sign == cutfn::PieceSign::Negative);
  CHECK(g.tags()[1].index == 1);
  CHECK(g.tags()[3].index == 0);
}

TEST_CASE("builder memoizes the ladder") {
  cutfn::FamilyBuilder b(standard_schedule());
  const PwlFunction& f3 = b.at(3);
  const PwlFunction& again = b.at(3);
  CHECK(&f3 == &again);
  CHECK(b.at(0) == cutfn::gmi(R("1/2")));
  CHECK(b.at(1) == cutfn::build(standard_schedule(), 1));
}

TEST_CASE("explicit schedules exhaust") {
  EpsilonSchedule e =
      EpsilonSchedule::explicit_list(R("1/2"), {R("1/8"), R("1/32")});
  CHECK_NOTHROW((void)cutfn::build(e, 2));
  CHECK_THROWS_AS((void)cutfn::build(e, 3), Error);
}

TEST_CASE("structure report holds on the family") {
  EpsilonSchedule s = standard_schedule();
  cutfn::FamilyBuilder b(s);
  for (std::size_t i = 0; i <= 6; ++i) {
    cutfn::VerificationReport r = cutfn::structure_report(b.at(i), s, i);
    CAPTURE(i);
    CHECK(r.holds);
    CHECK(r.summary.at("gamma") == s.gamma(i));
    CHECK(r.summary.at("negative_slope") == Rational(-2));
  }
  cutfn::VerificationReport r1 = cutfn::structure_report(b.at(1), s, 1);
  CHECK(r1.summary.at("positive_slope") == R("10/3"));
  CHECK(r1.summary.at("positive_length") == R("3/16"));
  cutfn::VerificationReport r2 = cutfn::structure_report(b.at(2), s, 2);
  CHECK(r2.summary.at("positive_slope") == R("22/5"));
  CHECK(r2.summary.at("positive_count") == Rational(4));
  CHECK(r2.summary.at("negative_count") == Rational(4));
}

TEST_CASE("structure report rejects impostors") {
  EpsilonSchedule s = standard_schedule();
  // right shape, wrong depth
  cutfn::VerificationReport r =
      cutfn::structure_report(cutfn::build(s, 2), s, 1);
  CHECK(!r.holds);
  CHECK(!r.witnesses.empty());

  // value tampered: slopes change
  PwlFunction f = testsupport::bump_value(cutfn::build(s, 1), 1, R("1/100"));
  cutfn::VerificationReport r2 = cutfn::structure_report(f, s, 1);
  CHECK(!r2.holds);

  // a function with a flat piece
  cutfn::VerificationReport r3 =
      cutfn::structure_report(testsupport::three_slope_minimal(), s, 1);
  CHECK(!r3.holds);
}

TEST_CASE("lambda and mu") {
  auto [lambda, mu] = cutfn::lambda_mu(R("1/2"), R("1/8"));
  CHECK(lambda == R("6/5"));
  CHECK(mu == R("2/5"));
  CHECK_THROWS_AS((void)cutfn::lambda_mu(R("1/2"), R("3/4")), Error);
}

TEST_CASE("reduced parameters") {
  EpsilonSchedule red = cutfn::reduced_parameters(standard_schedule());
  CHECK(red.kind() == EpsilonSchedule::Kind::Geometric);
  CHECK(red.alpha() == R("3/5"));
  CHECK(red.base() == R("2/5"));
  CHECK(red.ratio() == R("1/4"));

  EpsilonSchedule e = EpsilonSchedule::explicit_list(
      R("1/2"), {R("1/8"), R("1/32"), R("1/128")});
  EpsilonSchedule red_e = cutfn::reduced_parameters(e);
  CHECK(red_e.kind() == EpsilonSchedule::Kind::Explicit);
  CHECK(red_e.alpha() == R("3/5"));
  CHECK(red_e.epsilons() ==
        std::vector<Rational>{R("1/10"), R("1/40")});

  // One-step schedule reduces to the depth-0-only schedule.
  EpsilonSchedule one = EpsilonSchedule::explicit_list(R("1/2"), {R("1/8")});
  EpsilonSchedule red_one = cutfn::reduced_parameters(one);
  CHECK(red_one.epsilons().empty());
  CHECK(red_one.max_depth() == std::size_t{0});
  CHECK(cutfn::verify_recursive_decomposition(one, 1).holds);
}

TEST_CASE("recursive decomposition verifies") {
  EpsilonSchedule s = standard_schedule();
  for (std::size_t i = 1; i <= 6; ++i) {
    cutfn::VerificationReport r = cutfn::verify_recursive_decomposition(s, i);
    CAPTURE(i);
    CHECK(r.holds);
    CHECK(r.summary.at("lambda") == R("6/5"));
    CHECK(r.summary.at("mu") == R("2/5"));
    CHECK(r.summary.at("alpha_reduced") == R("3/5"));
  }
  CHECK_THROWS_AS((void)cutfn::verify_recursive_decomposition(s, 0), Error);

  EpsilonSchedule e = EpsilonSchedule::explicit_list(
      R("1/2"), {R("1/8"), R("1/32")});
  CHECK(cutfn::verify_recursive_decomposition(e, 2).holds);
}

TEST_CASE("decomposition identity spot values") {
  // psi_2(x) = lambda x + mu psi'_1(2x / (alpha + eps_1)) on [0, alpha+eps_1]
  EpsilonSchedule s = standard_schedule();
  PwlFunction f2 = cutfn::build(s, 2);
  EpsilonSchedule red = cutfn::reduced_parameters(s);
  PwlFunction g1 = cutfn::build(red, 1);
  Rational lambda = R("6/5"), mu = R("2/5"), denom = R("5/8");
  for (const char* xs : {"0", "1/16", "3/16", "1/4", "5/16", "2/5", "1/2",
                         "5/8", "9/40"}) {
    Rational x = R(xs);
    CAPTURE(xs);
    CHECK(f2.eval(x) == lambda * x + mu * g1.eval(Rational(2) * x / denom));
  }
}

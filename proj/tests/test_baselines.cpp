#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "varcs/baselines.hpp"
#include "varcs/streams.hpp"
#include "varcs/variance_cs.hpp"

using namespace varcs;

TEST_CASE("mp interval on equal samples and its limit") {
  const std::vector<double> equal(101, 0.37);
  const Interval iv = mp_std_interval(equal, 0.1);
  CHECK(iv.lower == 0.0);
  CHECK(iv.upper == doctest::Approx(0.24477468306808165).epsilon(1e-14));

  const std::vector<double> tiny(1, 0.2);
  CHECK_THROWS_AS(mp_std_interval(tiny, 0.1), std::invalid_argument);

  // radius shrinks like 1/sqrt(n)
  const std::vector<double> big(1000001, 0.37);
  CHECK(mp_std_interval(big, 0.1).upper < 0.003);
}

TEST_CASE("mp tracker matches the batch formula and brackets sigma") {
  StreamSpec spec;
  spec.seed = 77;
  spec.length = 10000;
  const std::vector<double> xs = generate_stream(spec);
  MpTracker tracker(0.05);
  for (double x : xs) tracker.update(x);
  const Interval batch = mp_std_interval(xs, 0.05);
  const Interval streamed = tracker.std_interval();
  CHECK(streamed.lower == doctest::Approx(batch.lower).epsilon(1e-10));
  CHECK(streamed.upper == doctest::Approx(batch.upper).epsilon(1e-10));
  CHECK(streamed.contains(std::sqrt(1.0 / 12.0)));
}

TEST_CASE("decoupled tracker starts vacuous") {
  DecoupledTracker tracker(0.05);
  CHECK(tracker.upper() == 1.0);
  CHECK(tracker.lower() == 0.0);
  CHECK(tracker.interval() == Interval{0.0, 1.0});
}

TEST_CASE("decoupled bounds are dominated by the direct construction") {
  for (auto [kind, a, b] : std::vector<std::tuple<StreamKind, double, double>>{
           {StreamKind::uniform01, 0.0, 0.0},
           {StreamKind::beta, 2.0, 6.0},
           {StreamKind::beta, 5.0, 5.0}}) {
    StreamSpec spec;
    spec.kind = kind;
    spec.a = a;
    spec.b = b;
    spec.seed = 1001;
    spec.length = 10000;

    VarianceTracker eb(0.05);
    DecoupledTracker dec(0.05);
    StreamGenerator gen(spec);
    for (std::size_t t = 0; t < spec.length; ++t) {
      const double x = gen.next();
      eb.update(x);
      dec.update(x);
    }
    CHECK(dec.upper() >= eb.interval().upper);
    CHECK(dec.lower() <= eb.interval().lower);
    // both still bracket the truth on this seed
    const double truth = true_moments(spec).variance;
    CHECK(dec.interval().contains(truth));
    CHECK(eb.interval().contains(truth));
  }
}

TEST_CASE("decoupled lower handles degenerate streams") {
  DecoupledTracker tracker(0.05);
  for (int t = 0; t < 2000; ++t) {
    tracker.update(0.6);
    CHECK(tracker.lower() == 0.0);
  }
}

TEST_CASE("alternative plug-ins: first step uninformative, slightly looser overall") {
  AltLowerTracker t1(0.05);
  CHECK(t1.update(0.8).lower == 0.0);

  std::size_t main_wins = 0, seeds = 40;
  for (std::size_t s = 0; s < seeds; ++s) {
    StreamSpec spec;
    spec.seed = derive_seed(31, s);
    spec.length = 10000;
    VarianceTracker main(0.05);
    AltLowerTracker alt(0.05);
    StreamGenerator gen(spec);
    for (std::size_t t = 0; t < spec.length; ++t) {
      const double x = gen.next();
      main.update(x);
      alt.update(x);
    }
    if (main.interval().lower >= alt.lower()) ++main_wins;
  }
  CHECK(main_wins >= (9 * seeds) / 10);
}

TEST_CASE("all baselines are valid at alpha = 0.05") {
  const double alpha = 0.05;
  const std::size_t reps = 300;
  const double bound = alpha + 3.0 * std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(reps));
  for (auto [kind, a, b] : std::vector<std::tuple<StreamKind, double, double>>{
           {StreamKind::uniform01, 0.0, 0.0}, {StreamKind::beta, 2.0, 6.0}}) {
    std::size_t miss_mp = 0, miss_dec = 0, miss_alt = 0, miss_deb = 0;
    StreamSpec spec;
    spec.kind = kind;
    spec.a = a;
    spec.b = b;
    spec.length = 1500;
    const double truth = true_moments(spec).variance;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      spec.seed = derive_seed(0xBA5E, rep);
      StreamGenerator gen(spec);
      MpTracker mp(alpha);
      DecoupledTracker dec(alpha);
      AltLowerTracker alt(alpha);
      DoubleEbTracker deb(alpha, spec.length);
      bool esc_dec = false, esc_alt = false, esc_deb = false;
      for (std::size_t t = 0; t < spec.length; ++t) {
        const double x = gen.next();
        mp.update(x);
        if (!dec.update(x).contains(truth)) esc_dec = true;
        if (!alt.update(x).contains(truth)) esc_alt = true;
        if (!deb.update(x).contains(truth)) esc_deb = true;
      }
      miss_mp += mp.var_interval().contains(truth) ? 0 : 1;  // MP: pointwise at n
      miss_dec += esc_dec ? 1 : 0;
      miss_alt += esc_alt ? 1 : 0;
      miss_deb += esc_deb ? 1 : 0;
    }
    const double r = static_cast<double>(reps);
    CHECK(static_cast<double>(miss_mp) / r <= bound);
    CHECK(static_cast<double>(miss_dec) / r <= bound);
    CHECK(static_cast<double>(miss_alt) / r <= bound);
    CHECK(static_cast<double>(miss_deb) / r <= bound);
  }
}

TEST_CASE("double-eb lower bound") {
  DoubleEbTracker t1(0.05, 10000);
  CHECK(t1.update(0.5).lower == 0.0);  // R~_1 capped at 1 swamps the bound

  StreamSpec spec;
  spec.seed = 99;
  spec.length = 10000;
  VarianceTracker bennett_based(0.05);
  DoubleEbTracker double_eb(0.05, spec.length);
  StreamGenerator gen(spec);
  for (std::size_t t = 0; t < spec.length; ++t) {
    const double x = gen.next();
    bennett_based.update(x);
    double_eb.update(x);
  }
  CHECK(std::isfinite(double_eb.lower()));
  CHECK(double_eb.lower() >= 0.0);
  CHECK(double_eb.lower() <= bennett_based.interval().lower);
  CHECK_THROWS_AS(DoubleEbTracker(0.05, 1), std::invalid_argument);
}

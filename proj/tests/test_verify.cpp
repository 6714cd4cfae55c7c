#include <algorithm>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "hkts/bounds.hpp"
#include "hkts/verify.hpp"

using namespace hkts;

namespace {

const PropertyResult& find(const std::vector<PropertyResult>& results, const std::string& name) {
    const auto it = std::find_if(results.begin(), results.end(),
                                 [&](const PropertyResult& r) { return r.name == name; });
    if (it == results.end()) throw std::runtime_error("no suite named " + name);
    return *it;
}

VerifyOptions small(double delta) {
    VerifyOptions o;
    o.config = ModelConfig::homogeneous(20, 10, 0.5, 0.2, 0.8, delta);
    o.trials = 100;
    o.steps = 100;
    o.noise_draws = 100000;
    return o;
}

}  // namespace

TEST(RandomAdmissibleConfig, DrawsValidAdmissibleModels) {
    Rng rng(31);
    int at_edge = 0;
    for (int k = 0; k < 2000; ++k) {
        const ModelConfig c = random_admissible_config(rng, 40);
        EXPECT_NO_THROW(c.validate());
        ASSERT_TRUE(bounds_apply(c));
        const NoiseBounds b = compute_bounds(c);
        EXPECT_TRUE(is_admissible(c.delta, b));
        EXPECT_LE(c.n, 40u);
        at_edge += c.delta == b.delta_lower;
    }
    EXPECT_GT(at_edge, 300);
}

TEST(Verification, DefaultConfigPasses) {
    const auto results = run_verification(small(0.02));
    EXPECT_EQ(results.size(), 6u);
    for (const PropertyResult& r : results) {
        EXPECT_EQ(r.verdict, Verdict::pass) << r.name << ": " << r.note;
        EXPECT_GE(r.margin, 0.0) << r.name;
    }
}

TEST(Verification, Reproducible) {
    const auto a = run_verification(small(0.02));
    const auto b = run_verification(small(0.02));
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].margin, b[i].margin) << a[i].name;
}

TEST(Verification, DisabledClampIsCaught) {
    VerifyOptions o = small(0.02);
    o.config.truth = 1.0;
    o.disable_clamp = true;
    const auto results = run_verification(o);
    const PropertyResult& range = find(results, "range-preservation");
    EXPECT_EQ(range.verdict, Verdict::fail);
    EXPECT_LT(range.margin, 0.0);
}

TEST(Verification, StrongNoiseSkipsAbsorption) {
    const auto results = run_verification(small(0.03));
    EXPECT_EQ(find(results, "band-absorption").verdict, Verdict::skip);
    for (const PropertyResult& r : results) EXPECT_NE(r.verdict, Verdict::fail) << r.name;
}

TEST(Verification, NoSeekersSkipsBandSuites) {
    VerifyOptions o = small(0.02);
    o.config = ModelConfig::homogeneous(10, 0, 0.5, 0.2, 0.8, 0.02);
    const auto results = run_verification(o);
    EXPECT_EQ(find(results, "band-absorption").verdict, Verdict::skip);
    EXPECT_EQ(find(results, "range-preservation").verdict, Verdict::pass);
}

TEST(QuarterTails, FrequenciesNearOneQuarter) {
    Rng rng(32);
    for (double d : {0.001, 0.02, 0.5}) {
        const PropertyResult r = check_quarter_tails(d, rng, 100000);
        EXPECT_EQ(r.verdict, Verdict::pass) << d;
    }
    // A tolerance far below sampling error must fail.
    EXPECT_EQ(check_quarter_tails(0.02, rng, 999, 1e-9).verdict, Verdict::fail);
}

TEST(BoundConsistency, HoldsAtTheLowerEdge) {
    Rng rng(33);
    const PropertyResult r = check_bound_consistency(rng, 5000);
    EXPECT_EQ(r.verdict, Verdict::pass);
    EXPECT_GE(r.margin, 0.0);
}

TEST(RangePreservation, ClampedStepsStayInUnitInterval) {
    Rng rng(34);
    for (int k = 0; k < 50; ++k) {
        ModelConfig c = random_admissible_config(rng, 20);
        c.delta = 0.3;
        EXPECT_EQ(check_range_preservation(c, rng, 50).verdict, Verdict::pass);
    }
}

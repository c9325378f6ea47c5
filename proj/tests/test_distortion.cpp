#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <sstream>

#include "rsrd/channel.hpp"
#include "rsrd/distortion.hpp"
#include "rsrd/rng.hpp"

using namespace rsrd;

namespace {
std::shared_ptr<const FieldContext> field16 = std::make_shared<const FieldContext>(4);
std::shared_ptr<const FieldContext> field256 = std::make_shared<const FieldContext>(8);

Pattern random_pattern(int n, int lo, int hi, Rng& rng) {
    Pattern out(n);
    for (auto& v : out) v = static_cast<Letter>(lo + rng.next_below(hi - lo + 1));
    return out;
}
}  // namespace

TEST_CASE("conventional and generalized distortion matrices") {
    RSCode code(255, 239, field256);
    SECTION("mBM-1") {
        auto spec = build_spec(SchemeSpec::mbm_l(1), code);
        REQUIRE(spec.at(0, 0) == 1.0);
        REQUIRE(spec.at(0, 1) == 2.0);
        REQUIRE(spec.at(1, 0) == 1.0);
        REQUIRE(spec.at(1, 1) == 0.0);
        REQUIRE(spec.d_thresh == 17.0);
    }
    SECTION("mBM-2") {
        auto spec = build_spec(SchemeSpec::mbm_l(2), code);
        double expect[3][3] = {{1, 2, 2}, {1, 0, 2}, {1, 2, 0}};
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) REQUIRE(spec.at(j, k) == expect[j][k]);
    }
    SECTION("bit-level") {
        auto spec = build_spec(SchemeSpec::bit_level(), code);
        REQUIRE(spec.at(0, 0) == 1.0);
        REQUIRE(spec.at(0, 1) == 3.0);
        REQUIRE(spec.at(1, 0) == 1.0);
        REQUIRE(spec.at(1, 1) == 0.0);
        REQUIRE(spec.d_thresh == 1.5 * 17);
    }
    SECTION("errors-only deletes the erasure column") {
        auto spec = build_spec(SchemeSpec::errors_only_l(2), code);
        REQUIRE(spec.rep_min == 1);
        double expect[3][2] = {{1, 1}, {0, 1}, {1, 0}};
        for (int j = 0; j < 3; ++j)
            for (int k = 1; k <= 2; ++k) REQUIRE(spec.at(j, k) == expect[j][k - 1]);
        REQUIRE(spec.d_thresh == 8.5);
    }
}

TEST_CASE("allowable multiplicity type sets") {
    SECTION("A(2,2) matches the worked example") {
        auto a22 = allowable_set(2, 2);
        REQUIRE(a22.size() == 4);
        REQUIRE(a22[0].m == std::vector<int>{2, 0});
        REQUIRE(a22[1].m == std::vector<int>{1, 1});
        REQUIRE(a22[2].m == std::vector<int>{0, 2});
        REQUIRE(a22[3].m == std::vector<int>{0, 0});
    }
    SECTION("A(3,3) is the stated permutation closure") {
        auto a33 = allowable_set(3, 3);
        REQUIRE(a33.size() == 14);  // perms of (3,0,0),(0,0,0),(1,1,0),(2,1,0),(1,1,1)
        auto contains = [&](std::vector<int> v) {
            for (const auto& t : a33)
                if (t.m == v) return true;
            return false;
        };
        for (auto v : std::vector<std::vector<int>>{{3, 0, 0}, {0, 3, 0}, {0, 0, 3},
                                                    {0, 0, 0}, {1, 1, 0}, {1, 0, 1},
                                                    {0, 1, 1}, {2, 1, 0}, {1, 2, 0},
                                                    {2, 0, 1}, {1, 0, 2}, {0, 2, 1},
                                                    {0, 1, 2}, {1, 1, 1}})
            REQUIRE(contains(v));
        REQUIRE_FALSE(contains({2, 0, 0}));
        REQUIRE_FALSE(contains({1, 0, 0}));
        REQUIRE_FALSE(contains({2, 2, 0}));
    }
    SECTION("A(3,2)") {
        auto a32 = allowable_set(3, 2);
        REQUIRE(a32.size() == 6);  // (3,0),(0,3),(2,1),(1,2),(1,1),(0,0)
    }
    SECTION("guaranteed members of A(mu,mu)") {
        for (int mu = 2; mu <= 5; ++mu) {
            auto set = allowable_set(mu, mu);
            auto contains = [&](const std::vector<int>& v) {
                for (const auto& t : set)
                    if (t.m == v) return true;
                return false;
            };
            REQUIRE(contains(std::vector<int>(mu, 0)));
            REQUIRE(contains(std::vector<int>(mu, 1)));
            for (int pos = 0; pos < mu; ++pos) {
                std::vector<int> v(mu, 0);
                v[pos] = mu;
                REQUIRE(contains(v));
            }
            std::vector<int> halves(mu, 0);
            halves[0] = halves[1] = mu / 2;
            REQUIRE(contains(halves));
        }
    }
}

TEST_CASE("ASD distortion matrix and threshold") {
    RSCode code(255, 239, field256);
    SECTION("mASD-2 at a = mu = 2") {
        auto spec = build_spec(SchemeSpec::masd(2), code);
        REQUIRE(spec.rep_size == 4);
        // columns: (2,0), (1,1), (0,2), (0,0)
        double expect[3][4] = {{2, 5.0 / 3, 2, 1}, {0, 2.0 / 3, 2, 1}, {2, 2.0 / 3, 0, 1}};
        for (int j = 0; j < 3; ++j)
            for (int k = 1; k <= 4; ++k)
                REQUIRE(spec.at(j, k) == Catch::Approx(expect[j][k - 1]).margin(1e-15));
        REQUIRE(spec.d_thresh == Catch::Approx(17.0));
        REQUIRE(spec.den == 6);
        // exact numerators over a(a+1) = 6
        REQUIRE(spec.num_at(0, 1) == 12);
        REQUIRE(spec.num_at(1, 2) == 4);
        REQUIRE(spec.thresh_num == 17 * 6);
    }
    SECTION("first column is [2mu/a, 0, 2mu/a, ...] for any a") {
        SchemeSpec s = SchemeSpec::masd(2, 3);
        auto spec = build_spec(s, code);
        REQUIRE(spec.at(0, 1) == Catch::Approx(4.0 / 3));
        REQUIRE(spec.at(1, 1) == 0.0);
        REQUIRE(spec.at(2, 1) == Catch::Approx(4.0 / 3));
    }
    SECTION("validation") {
        REQUIRE_THROWS_AS(build_spec(SchemeSpec::masd(3, 2), code), UsageError);  // a < mu
        SchemeSpec bad = SchemeSpec::masd(2);
        bad.types = {{{2, 0}}, {{1, 0}}};  // (1,0) is not allowable
        REQUIRE_THROWS_AS(build_spec(bad, code), UsageError);
        bad.relaxed = true;
        REQUIRE_NOTHROW(build_spec(bad, code));
        SchemeSpec order = SchemeSpec::masd(2);
        order.types = {{{1, 1}}, {{2, 0}}};  // type 1 must be (mu, 0)
        REQUIRE_THROWS_AS(build_spec(order, code), UsageError);
    }
    SECTION("entries stay nonnegative for relaxed pair types") {
        for (int mu : {4, 10}) {
            SchemeSpec s{SchemeKind::asd, 2, mu, 0, true, relaxed_pair_types(mu)};
            auto spec = build_spec(s, code);
            for (double v : spec.delta) REQUIRE(v >= 0.0);
        }
    }
}

TEST_CASE("distortion evaluation") {
    RSCode code(15, 9, field16);
    auto spec = build_spec(SchemeSpec::mbm_l(1), code);
    SECTION("table lookup sum") {
        REQUIRE(distortion({0, 1, 1}, {1, 1, 0}, spec) == 3.0);
    }
    SECTION("chi decomposition on random pairs") {
        Rng rng(41);
        for (int trial = 0; trial < 1000; ++trial) {
            auto x = random_pattern(15, 0, 1, rng);
            auto xh = random_pattern(15, 0, 1, rng);
            auto st = PatternStats::from(x, xh, spec);
            double expect = 2.0 * st.chi_at(0, 1) + st.chi_at(0, 0) + st.chi_at(1, 0);
            REQUIRE(distortion(x, xh, spec) == expect);
            REQUIRE(st.erasures() == st.chi_at(0, 0) + st.chi_at(1, 0));
            REQUIRE(st.errors() == st.chi_at(0, 1));
        }
    }
    SECTION("errors-only distortion counts unerased errors") {
        auto eo = build_spec(SchemeSpec::errors_only_l(2), code);
        Rng rng(42);
        for (int trial = 0; trial < 1000; ++trial) {
            auto x = random_pattern(15, 0, 2, rng);
            auto xh = random_pattern(15, 1, 2, rng);
            auto st = PatternStats::from(x, xh, eo);
            REQUIRE(distortion(x, xh, eo) == st.errors());
        }
    }
    SECTION("alphabet mismatch") {
        REQUIRE_THROWS_AS(distortion({0, 2, 0}, {1, 1, 1}, spec), UsageError);
        REQUIRE_THROWS_AS(distortion({0, 1}, {1, 1, 1}, spec), UsageError);
    }
}

TEST_CASE("threshold equivalences by exhaustive enumeration") {
    SECTION("generalized scheme, N = 6, ell <= 2") {
        RSCode code(6, 2, field16);  // d_min = 5
        for (int ell : {1, 2}) {
            auto spec = build_spec(SchemeSpec::mbm_l(ell), code);
            const int base = ell + 1;
            int total = 1;
            for (int i = 0; i < 6; ++i) total *= base;
            Pattern x(6), xh(6);
            for (int xi = 0; xi < total; ++xi) {
                int v = xi;
                for (int i = 0; i < 6; ++i) {
                    x[i] = static_cast<Letter>(v % base);
                    v /= base;
                }
                for (int hi = 0; hi < total; ++hi) {
                    int w = hi;
                    for (int i = 0; i < 6; ++i) {
                        xh[i] = static_cast<Letter>(w % base);
                        w /= base;
                    }
                    auto st = PatternStats::from(x, xh, spec);
                    bool thresh = 2 * st.errors() + st.erasures() < code.d_min();
                    if (trial_success(x, xh, spec) != thresh) {
                        REQUIRE(trial_success(x, xh, spec) == thresh);
                    }
                }
            }
        }
    }
    SECTION("bit-level scheme, n = 12") {
        RSCode code(6, 2, field16);
        auto spec = build_spec(SchemeSpec::bit_level(), code);
        Pattern b(12), bh(12);
        for (int xi = 0; xi < (1 << 12); ++xi) {
            for (int i = 0; i < 12; ++i) b[i] = (xi >> i) & 1;
            for (int hi = 0; hi < (1 << 12); ++hi) {
                for (int i = 0; i < 12; ++i) bh[i] = (hi >> i) & 1;
                int eb = 0, nub = 0;
                for (int i = 0; i < 12; ++i) {
                    if (bh[i] == 0) ++eb;
                    else if (b[i] == 0) ++nub;
                }
                bool thresh = 3 * nub + eb < 1.5 * code.d_min();
                if (trial_success(b, bh, spec) != thresh) {
                    REQUIRE(trial_success(b, bh, spec) == thresh);
                }
            }
        }
    }
}

TEST_CASE("score, cost and the ASD success oracle") {
    RSCode code(15, 9, field16);
    SECTION("all type-1 columns with correct hard decisions") {
        auto types = allowable_set(2, 2);
        auto cost2 = type_cost2_table(types);
        Pattern x(3, 1), xh(3, 1);
        auto sc = score_cost_from_patterns(x, xh, types, cost2);
        REQUIRE(sc.score == 6);
        REQUIRE(sc.cost == 9);
        REQUIRE(2 * sc.cost == 3 * sc.score);  // Lemma-1 equality at type 1
    }
    SECTION("zero score never succeeds") {
        ScoreCost sc{0, 0};
        REQUIRE_FALSE(asd_success(sc, code));
    }
    SECTION("explicit multiplicity matrix agrees with the pattern path") {
        auto types = allowable_set(2, 2);
        auto cost2 = type_cost2_table(types);
        Rng rng(43);
        std::vector<std::vector<gf_elem>> ranked(6);
        std::vector<gf_elem> cw(6);
        for (int i = 0; i < 6; ++i) {
            gf_elem base = static_cast<gf_elem>(rng.next_below(256));
            ranked[i] = {base, static_cast<gf_elem>((base + 1) % 256),
                         static_cast<gf_elem>((base + 2) % 256)};
        }
        for (int trial = 0; trial < 200; ++trial) {
            Pattern xh = random_pattern(6, 1, 4, rng);
            Pattern x = random_pattern(6, 0, 2, rng);
            for (int i = 0; i < 6; ++i)
                cw[i] = x[i] == 0 ? ranked[i][2] : ranked[i][x[i] - 1];
            auto mat = multiplicity_matrix(xh, types, ranked, 256);
            auto sc_mat = score_cost(mat, 256, 6, cw);
            auto sc_pat = score_cost_from_patterns(x, xh, types, cost2);
            REQUIRE(sc_mat.score == sc_pat.score);
            REQUIRE(sc_mat.cost == sc_pat.cost);
        }
    }
    SECTION("bit-level MAS column rules") {
        std::vector<gf_elem> hd{5, 9};
        Pattern bh(8, 1);
        auto mat = multiplicity_matrix_bit(bh, hd, 4, 16);
        REQUIRE(mat[5 * 2 + 0] == 2);
        REQUIRE(mat[9 * 2 + 1] == 2);
        bh[1] = 0;  // erase bit 1 of position 0
        mat = multiplicity_matrix_bit(bh, hd, 4, 16);
        REQUIRE(mat[5 * 2 + 0] == 1);
        REQUIRE(mat[(5 ^ 2) * 2 + 0] == 1);
        bh[2] = 0;  // second erased bit: all-zero column
        mat = multiplicity_matrix_bit(bh, hd, 4, 16);
        for (int v = 0; v < 16; ++v) REQUIRE(mat[v * 2 + 0] == 0);
    }
    SECTION("column sums at most mu on random patterns") {
        auto types = allowable_set(3, 3);
        std::vector<std::vector<gf_elem>> ranked(10);
        for (int i = 0; i < 10; ++i) ranked[i] = {1, 2, 3};
        Rng rng(44);
        for (int trial = 0; trial < 50; ++trial) {
            Pattern xh = random_pattern(10, 1, static_cast<int>(types.size()), rng);
            auto mat = multiplicity_matrix(xh, types, ranked, 16);
            for (int i = 0; i < 10; ++i) {
                int sum = 0;
                for (int v = 0; v < 16; ++v) sum += mat[v * 10 + i];
                REQUIRE(sum <= 3);
            }
        }
    }
}

TEST_CASE("Lemma-1 inequality and the Theorem-1 equivalence") {
    RSCode code(255, 239, field256);
    Rng rng(45);
    for (int trial = 0; trial < 3000; ++trial) {
        int mu = 1 + static_cast<int>(rng.next_below(4));
        int ell = 1 + static_cast<int>(rng.next_below(4));
        auto types = allowable_set(mu, ell);
        auto cost2 = type_cost2_table(types);
        int a = mu + static_cast<int>(rng.next_below(3));
        SchemeSpec s{SchemeKind::asd, ell, mu, a};
        auto spec = build_spec(s, code);
        int n = 20 + static_cast<int>(rng.next_below(200));
        Pattern x(n), xh(n);
        for (int i = 0; i < n; ++i) {
            x[i] = static_cast<Letter>(rng.next_below(ell + 1));
            xh[i] = static_cast<Letter>(1 + rng.next_below(types.size()));
        }
        auto sc = score_cost_from_patterns(x, xh, types, cost2);
        REQUIRE(2 * sc.cost >= (mu + 1) * sc.score);  // Lemma 1

        // Theorem 1 in exact integers over the common denominator a(a+1);
        // the threshold scales with the pattern length when n < N
        bool cond = (a + 1) * (2 * sc.score - static_cast<std::int64_t>(a) * (code.k() - 1)) >
                    2 * sc.cost;
        std::int64_t dnum = 0;
        for (int i = 0; i < n; ++i) dnum += spec.num_at(x[i], xh[i]);
        std::int64_t thresh = static_cast<std::int64_t>(mu) * (2 * a + 1 - mu) * n -
                              static_cast<std::int64_t>(code.k() - 1) * a * (a + 1);
        REQUIRE(cond == (dnum < thresh));
    }
}

TEST_CASE("high-rate codes: full Condition 2 equals the distortion predicate") {
    // K/N >= 1/N + mu(mu+3)/((mu+1)(mu+2)) with mu = 2 -> (255, 214)
    RSCode code(255, 214, field256);
    auto types = allowable_set(2, 2);
    auto cost2 = type_cost2_table(types);
    auto spec = build_spec(SchemeSpec::masd(2), code);
    Rng rng(46);
    int successes = 0;
    for (int trial = 0; trial < 3000; ++trial) {
        Pattern x(255), xh(255);
        int flip = 1 + static_cast<int>(rng.next_below(60));
        for (int i = 0; i < 255; ++i) {
            bool err = rng.next_below(255) < static_cast<std::uint64_t>(flip);
            x[i] = err ? static_cast<Letter>(rng.next_below(3)) : 1;
            // mostly type 1 so the score interval straddles the threshold
            xh[i] = rng.next_below(10) < 8 ? 1 : static_cast<Letter>(1 + rng.next_below(4));
        }
        auto sc = score_cost_from_patterns(x, xh, types, cost2);
        bool ok = asd_success(sc, code);
        successes += ok;
        REQUIRE(ok == trial_success(x, xh, spec));
    }
    REQUIRE(successes > 0);  // both outcomes must actually occur
}

TEST_CASE("D_max formulas") {
    RSCode code(255, 239, field256);
    SECTION("perfect channel gives zero") {
        auto spec = build_spec(SchemeSpec::mbm_l(1), code);
        auto P = msc_source_dist(256, 255, 1.0, SchemeKind::mbm, 1);
        REQUIRE(d_max(P, spec) == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("mASD-2 per-position term") {
        // per-letter means read off the (dstmASD2) columns directly:
        // type (1,1) contributes 5/3 - (p1 + p2)
        auto spec = build_spec(SchemeSpec::masd(2), code);
        Rng rng(47);
        for (int trial = 0; trial < 200; ++trial) {
            double p1 = 0.3 + 0.7 * rng.next_double();
            double p2 = std::min(p1, (1.0 - p1) * rng.next_double());
            SourceDist P;
            P.kind = SchemeKind::asd;
            P.ell = 2;
            P.p = {{1.0 - p1 - p2, p1, p2}};
            double expect = std::min({1.0, 2.0 * (1.0 - p1), 5.0 / 3 - (p1 + p2)});
            REQUIRE(d_max(P, spec) == Catch::Approx(expect).margin(1e-12));
        }
    }
    SECTION("mASD dominates mBM whenever the all-zero type is present") {
        auto masd = build_spec(SchemeSpec::masd(2), code);
        auto mbm2 = build_spec(SchemeSpec::mbm_l(2), code);
        Rng rng(48);
        for (int trial = 0; trial < 1000; ++trial) {
            SourceDist P;
            P.kind = SchemeKind::asd;
            P.ell = 2;
            double p1 = rng.next_double();
            double p2 = (1.0 - p1) * rng.next_double();
            P.p = {{1.0 - p1 - p2, p1, p2}};
            REQUIRE(d_max(P, masd) <= d_max(P, mbm2) + 1e-12);
        }
    }
}

TEST_CASE("spec CSV export") {
    RSCode code(15, 9, field16);
    auto spec = build_spec(SchemeSpec::mbm_l(1), code);
    std::ostringstream os;
    save_spec_csv(spec, os);
    REQUIRE(os.str() == "row_letter,col_letter,delta\n0,0,1\n0,1,2\n1,0,1\n1,1,0\n");
}

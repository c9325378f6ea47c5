#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <sstream>

#include "rsrd/channel.hpp"
#include "rsrd/rng.hpp"

using namespace rsrd;

namespace {
std::shared_ptr<const FieldContext> field16 = std::make_shared<const FieldContext>(4);
std::shared_ptr<const FieldContext> field256 = std::make_shared<const FieldContext>(8);
}  // namespace

TEST_CASE("sorting permutations on a fixed posterior matrix") {
    // m = 4, N = 3; column i is the posterior of position i
    // (rows are symbol values 0..3)
    std::vector<double> pi{
        0.01, 0.01, 0.93,   // symbol 0
        0.94, 0.03, 0.04,   // symbol 1
        0.03, 0.49, 0.01,   // symbol 2
        0.02, 0.47, 0.02};  // symbol 3
    auto rel = reliability_from_pi(pi, 4, 3, 2);

    REQUIRE(rel.phi[0] == std::vector<gf_elem>{1, 2, 3, 0});
    REQUIRE(rel.phi[1] == std::vector<gf_elem>{2, 3, 1, 0});
    REQUIRE(rel.phi[2] == std::vector<gf_elem>{0, 1, 3, 2});
    REQUIRE(rel.sigma == std::vector<int>{1, 2, 0});

    // transmitted = (2nd most likely, most likely, 3rd most likely)
    std::vector<gf_elem> tx{rel.ranked(0, 1), rel.ranked(1, 0), rel.ranked(2, 2)};
    auto x = extract_error_pattern(rel, tx, SchemeKind::mbm, 2);
    REQUIRE(x == Pattern{2, 1, 0});
}

TEST_CASE("reliability invariants on AWGN frames") {
    RSCode code(15, 9, field16);
    Rng rng(21);
    auto cw = code.encode(std::vector<gf_elem>(9, 3));
    auto rel = simulate_awgn(code, cw, ChannelSpec::Kind::awgn_bpsk, 4.0, SnrRef::ebn0_db, rng);
    for (int i = 0; i < rel.n; ++i) {
        double s = 0.0;
        for (int v = 0; v < rel.m; ++v) s += rel.prob(v, i);
        REQUIRE(s == Catch::Approx(1.0).margin(1e-9));
        for (int r = 0; r + 1 < rel.m; ++r)
            REQUIRE(rel.prob(rel.phi[i][r], i) >= rel.prob(rel.phi[i][r + 1], i));
    }
    for (int r = 0; r + 1 < rel.n; ++r)
        REQUIRE(rel.top_prob(rel.sigma[r]) <= rel.top_prob(rel.sigma[r + 1]));
}

TEST_CASE("noise extremes") {
    RSCode code(15, 9, field16);
    auto cw = code.encode(std::vector<gf_elem>(9, 5));
    SECTION("high SNR: transmitted symbol dominates") {
        Rng rng(22);
        auto rel =
            simulate_awgn(code, cw, ChannelSpec::Kind::awgn_bpsk, 22.0, SnrRef::ebn0_db, rng);
        for (int i = 0; i < rel.n; ++i) REQUIRE(rel.prob(cw[i], i) > 0.999);
    }
    SECTION("very low SNR: columns approach uniform") {
        Rng rng(23);
        auto rel =
            simulate_awgn(code, cw, ChannelSpec::Kind::awgn_bpsk, -35.0, SnrRef::ebn0_db, rng);
        for (int i = 0; i < rel.n; ++i)
            for (int v = 0; v < rel.m; ++v)
                REQUIRE(rel.prob(v, i) == Catch::Approx(1.0 / 16).margin(0.02));
    }
}

TEST_CASE("m-SC columns and parameter validation") {
    RSCode code(255, 239, field256);
    auto cw = code.encode(std::vector<gf_elem>(239, 0));
    SECTION("p = 1 gives unit columns on the transmitted word") {
        Rng rng(24);
        auto rel = simulate_msc(code, cw, 1.0, rng);
        for (int i = 0; i < rel.n; ++i) REQUIRE(rel.prob(cw[i], i) == 1.0);
    }
    SECTION("column values are p and (1-p)/(m-1)") {
        Rng rng(25);
        auto rel = simulate_msc(code, cw, 0.95, rng);
        for (int i = 0; i < 10; ++i) {
            REQUIRE(rel.top_prob(i) == Catch::Approx(0.95));
            REQUIRE(rel.prob(rel.phi[i][1], i) == Catch::Approx(0.05 / 255));
        }
    }
    SECTION("p outside (1/m, 1] is rejected") {
        Rng rng(26);
        REQUIRE_THROWS_AS(simulate_msc(code, cw, 1.0 / 256, rng), UsageError);
        REQUIRE_THROWS_AS(simulate_msc(code, cw, 1.2, rng), UsageError);
    }
}

TEST_CASE("m-SC empirical statistics") {
    RSCode code(255, 239, field256);
    Rng msg_rng(27);
    std::vector<gf_elem> msg(239);
    for (auto& s : msg) s = static_cast<gf_elem>(msg_rng.next_below(256));
    auto cw = code.encode(msg);

    SECTION("symbol error rate 0.1 +- 0.005 at p = 0.9 over 1e5 symbols") {
        std::uint64_t wrong = 0, total = 0;
        for (int frame = 0; frame < 400; ++frame) {
            Rng rng = Rng::derive(99, 0, frame);
            auto rel = simulate_msc(code, cw, 0.9, rng);
            for (int i = 0; i < rel.n; ++i) {
                wrong += rel.ranked(i, 0) != cw[i];
                ++total;
            }
        }
        REQUIRE(total >= 100000);
        REQUIRE(std::abs(double(wrong) / total - 0.1) < 0.005);
    }

    SECTION("error-pattern letters are i.i.d. Bernoulli(p): chi-square at 0.01") {
        const double p = 0.9;
        std::uint64_t n1 = 0, total = 0, pair[2][2] = {{0, 0}, {0, 0}};
        Letter prev = 1;
        for (int frame = 0; frame < 40; ++frame) {
            Rng rng = Rng::derive(101, 0, frame);
            auto rel = simulate_msc(code, cw, p, rng);
            auto x = extract_error_pattern(rel, cw, SchemeKind::mbm, 1);
            for (size_t i = 0; i < x.size(); ++i) {
                n1 += x[i];
                ++total;
                if (i > 0) ++pair[prev][x[i]];
                prev = x[i];
            }
        }
        REQUIRE(total >= 10000);
        // marginal fit, 1 dof, critical value 6.635
        double e1 = p * total, e0 = (1 - p) * total;
        double chi2 = (n1 - e1) * (n1 - e1) / e1 +
                      (double(total - n1) - e0) * (double(total - n1) - e0) / e0;
        REQUIRE(chi2 < 6.635);
        // pairwise independence, 1 dof
        double np = pair[0][0] + pair[0][1] + pair[1][0] + pair[1][1];
        double r1 = (pair[1][0] + pair[1][1]) / np, c1 = (pair[0][1] + pair[1][1]) / np;
        double chi2p = 0.0;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                double expd = np * (a ? r1 : 1 - r1) * (b ? c1 : 1 - c1);
                chi2p += (pair[a][b] - expd) * (pair[a][b] - expd) / expd;
            }
        REQUIRE(chi2p < 6.635);
    }
}

TEST_CASE("noiseless error pattern is all ones") {
    RSCode code(15, 9, field16);
    auto cw = code.encode(std::vector<gf_elem>(9, 9));
    Rng rng(28);
    auto rel = simulate_msc(code, cw, 1.0, rng);
    auto x = extract_error_pattern(rel, cw, SchemeKind::mbm, 3);
    for (auto v : x) REQUIRE(v == 1);
    auto xb = extract_error_pattern(rel, cw, SchemeKind::bit_asd, 1);
    REQUIRE(xb.size() == 15u * 4);
    for (auto v : xb) REQUIRE(v == 1);
}

TEST_CASE("source distributions") {
    SECTION("m-SC analytic: ell = 1 and ell = m") {
        auto P1 = msc_source_dist(16, 15, 0.9, SchemeKind::mbm, 1);
        for (const auto& row : P1.p) {
            REQUIRE(row[1] == Catch::Approx(0.9));
            REQUIRE(row[0] == Catch::Approx(0.1));
        }
        auto Pm = msc_source_dist(16, 15, 0.9, SchemeKind::mbm, 16);
        for (const auto& row : Pm.p) REQUIRE(row[0] == Catch::Approx(0.0).margin(1e-12));
    }
    SECTION("per-frame rows sum to one and match the posterior") {
        RSCode code(15, 9, field16);
        Rng rng(29);
        auto cw = code.encode(std::vector<gf_elem>(9, 2));
        auto rel =
            simulate_awgn(code, cw, ChannelSpec::Kind::awgn_bpsk, 3.0, SnrRef::ebn0_db, rng);
        auto P = source_dist(rel, SchemeKind::mbm, 2);
        for (int i = 0; i < 15; ++i) {
            REQUIRE(P.p[i][1] == Catch::Approx(rel.top_prob(i)));
            double s = P.p[i][0] + P.p[i][1] + P.p[i][2];
            REQUIRE(s == Catch::Approx(1.0).margin(1e-9));
        }
    }
}

TEST_CASE("Algorithm B averaged profile is reliability ordered") {
    RSCode code(15, 9, field16);
    ChannelSpec ch{ChannelSpec::Kind::awgn_bpsk, 4.5, SnrRef::ebn0_db};
    auto prof = train_profile(code, ch, 200, 31);
    auto P = source_dist_from_profile(prof, SchemeKind::mbm, 1);
    REQUIRE(P.reliability_order);
    for (int i = 0; i + 1 < P.rows(); ++i) REQUIRE(P.p[i][1] <= P.p[i + 1][1] + 1e-12);
    for (const auto& row : P.p) {
        double s = 0.0;
        for (double v : row) s += v;
        REQUIRE(s == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("determinism: identical seeds give bit-identical posteriors") {
    RSCode code(255, 239, field256);
    auto cw = code.encode(std::vector<gf_elem>(239, 1));
    Rng a(555), b(555);
    auto r1 = simulate_awgn(code, cw, ChannelSpec::Kind::awgn_bpsk, 5.0, SnrRef::ebn0_db, a);
    auto r2 = simulate_awgn(code, cw, ChannelSpec::Kind::awgn_bpsk, 5.0, SnrRef::ebn0_db, b);
    REQUIRE(r1.pi == r2.pi);
    REQUIRE(r1.sigma == r2.sigma);
}

TEST_CASE("256-QAM posteriors") {
    RSCode code(255, 239, field256);
    auto cw = code.encode(std::vector<gf_elem>(239, 77));
    SECTION("high SNR concentrates on the transmitted symbol") {
        Rng rng(33);
        auto rel =
            simulate_awgn(code, cw, ChannelSpec::Kind::awgn_mqam, 40.0, SnrRef::esn0_db, rng);
        for (int i = 0; i < rel.n; ++i) REQUIRE(rel.ranked(i, 0) == cw[i]);
    }
    SECTION("columns are stochastic at moderate SNR") {
        Rng rng(34);
        auto rel =
            simulate_awgn(code, cw, ChannelSpec::Kind::awgn_mqam, 20.0, SnrRef::esn0_db, rng);
        for (int i = 0; i < rel.n; ++i) {
            double s = 0.0;
            for (int v = 0; v < rel.m; ++v) s += rel.prob(v, i);
            REQUIRE(s == Catch::Approx(1.0).margin(1e-9));
        }
    }
}

TEST_CASE("odd bit width rejects QAM") {
    auto f32 = std::make_shared<const FieldContext>(5);
    RSCode code(31, 25, f32);
    auto cw = code.encode(std::vector<gf_elem>(25, 0));
    Rng rng(35);
    REQUIRE_THROWS_AS(
        simulate_awgn(code, cw, ChannelSpec::Kind::awgn_mqam, 20.0, SnrRef::esn0_db, rng),
        UsageError);
}

TEST_CASE("profile CSV round trip") {
    auto P = msc_source_dist(16, 5, 0.85, SchemeKind::mbm, 2);
    std::ostringstream os;
    save_profile_csv(P, os);
    REQUIRE(os.str().rfind("position,letter,prob\n", 0) == 0);
    std::istringstream is(os.str());
    auto Q = load_profile_csv(is, SchemeKind::mbm, 2);
    REQUIRE(Q.rows() == 5);
    for (int i = 0; i < 5; ++i)
        for (size_t j = 0; j < 3; ++j)
            REQUIRE(Q.p[i][j] == Catch::Approx(P.p[i][j]).margin(1e-9));
}

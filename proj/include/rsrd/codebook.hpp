#ifndef RSRD_CODEBOOK_HPP
#define RSRD_CODEBOOK_HPP

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rsrd/distortion.hpp"
#include "rsrd/rng.hpp"
#include "rsrd/rs.hpp"
#include "rsrd/util.hpp"

namespace rsrd {

struct Codebook {
    std::vector<Pattern> patterns;
    double rate = 0.0;
    std::string provenance;
    std::uint64_t seed = 0;

    std::size_t size() const { return patterns.size(); }
};

inline std::size_t codebook_count(double rate) {
    return static_cast<std::size_t>(std::llround(std::exp2(rate)));
}

// Reliability-rank pattern -> position-order pattern: rank r goes to
// position sigma[r]. An empty sigma is the identity.
inline Pattern apply_sigma_inv(const Pattern& ranked, const std::vector<int>& sigma) {
    if (sigma.empty()) return ranked;
    Pattern out(ranked.size());
    for (size_t r = 0; r < ranked.size(); ++r) out[sigma[r]] = ranked[r];
    return out;
}

// Random codebook: 2^R patterns, letters drawn independently from the
// test-channel rows. Duplicates are kept; |B| semantics follow the rate.
inline Codebook gen_random(const std::vector<std::vector<double>>& q_rows, int rep_min,
                           double rate, std::uint64_t seed) {
    Codebook cb;
    cb.rate = rate;
    cb.seed = seed;
    cb.provenance = "random";
    const std::size_t count = codebook_count(rate);
    const std::size_t n = q_rows.size();
    Rng rng(seed);
    cb.patterns.assign(count, Pattern(n, 0));
    for (auto& pat : cb.patterns)
        for (std::size_t i = 0; i < n; ++i)
            pat[i] = static_cast<Letter>(rep_min + rng.next_categorical(q_rows[i]));
    return cb;
}

// ell-ary covering code over letters {1..ell}: every length-n_c word lies
// within Hamming distance t_c of some codeword.
struct CoveringCode {
    int n_c = 0, k_c = 0, t_c = 0, ell = 2;
    std::vector<Pattern> codewords;

    void verify_covering() const {
        std::size_t total = 1;
        for (int i = 0; i < n_c; ++i) total *= ell;
        Pattern word(n_c, 1);
        for (std::size_t w = 0; w < total; ++w) {
            std::size_t v = w;
            for (int i = 0; i < n_c; ++i) {
                word[i] = static_cast<Letter>(1 + v % ell);
                v /= ell;
            }
            int best = n_c + 1;
            for (const auto& cw : codewords) {
                int dist = 0;
                for (int i = 0; i < n_c; ++i) dist += word[i] != cw[i];
                best = std::min(best, dist);
                if (best <= t_c) break;
            }
            if (best > t_c) throw UsageError("covering radius check failed");
        }
    }

    static CoveringCode hamming74() {
        CoveringCode cc;
        cc.n_c = 7;
        cc.k_c = 4;
        cc.t_c = 1;
        cc.ell = 2;
        static const int parity[4] = {0b110, 0b101, 0b011, 0b111};
        for (int msg = 0; msg < 16; ++msg) {
            int par = 0;
            for (int b = 0; b < 4; ++b)
                if (msg & (1 << b)) par ^= parity[b];
            Pattern cw(7);
            for (int b = 0; b < 4; ++b) cw[b] = static_cast<Letter>(1 + ((msg >> b) & 1));
            for (int b = 0; b < 3; ++b) cw[4 + b] = static_cast<Letter>(1 + ((par >> (2 - b)) & 1));
            cc.codewords.push_back(cw);
        }
        cc.verify_covering();  // exhaustive: n_c <= 12
        return cc;
    }

    static CoveringCode golay2312() {
        CoveringCode cc;
        cc.n_c = 23;
        cc.k_c = 12;
        cc.t_c = 3;
        cc.ell = 2;
        const std::uint32_t gen = 0xC75;  // x^11+x^10+x^6+x^5+x^4+x^2+1
        for (std::uint32_t msg = 0; msg < 4096; ++msg) {
            std::uint32_t rem = msg << 11;
            for (int b = 22; b >= 11; --b)
                if (rem & (1u << b)) rem ^= gen << (b - 11);
            std::uint32_t word = (msg << 11) | rem;
            Pattern cw(23);
            for (int b = 0; b < 23; ++b) cw[b] = static_cast<Letter>(1 + ((word >> b) & 1));
            cc.codewords.push_back(cw);
        }
        return cc;
    }

    // one codeword per line, letters space-separated
    static CoveringCode from_stream(std::istream& is, int t_c, int ell) {
        CoveringCode cc;
        cc.t_c = t_c;
        cc.ell = ell;
        std::string line;
        while (std::getline(is, line)) {
            if (line.empty() || line[0] == '#') continue;
            std::istringstream ss(line);
            Pattern cw;
            int v;
            while (ss >> v) cw.push_back(static_cast<Letter>(v));
            if (!cw.empty()) cc.codewords.push_back(std::move(cw));
        }
        if (cc.codewords.empty()) throw UsageError("covering code file has no codewords");
        cc.n_c = static_cast<int>(cc.codewords.front().size());
        std::size_t kc = 0;
        while ((std::size_t(1) << kc) < cc.codewords.size()) ++kc;
        cc.k_c = static_cast<int>(kc);
        if (cc.n_c <= 12) cc.verify_covering();
        return cc;
    }
};

// Covering-code hybrid: cover codewords on the n_c least reliable ranks,
// random tails on the most reliable ranks at rate R - k_c log2(ell).
inline Codebook gen_hybrid(const CoveringCode& cover,
                           const std::vector<std::vector<double>>& q_mrp_rows, int rep_min,
                           double rate, const std::vector<int>& sigma, std::uint64_t seed) {
    const double cover_rate = cover.k_c * std::log2(static_cast<double>(cover.ell));
    if (rate < cover_rate - 1e-9)
        throw UsageError("hybrid codebook rate below the covering-code rate");
    const std::size_t n_mrp = q_mrp_rows.size();
    const std::size_t tails = codebook_count(rate - cover_rate);
    Codebook cb;
    cb.rate = rate;
    cb.seed = seed;
    cb.provenance = "hybrid";
    Rng rng(seed);
    std::vector<Pattern> tail_pats(tails, Pattern(n_mrp, 0));
    for (auto& t : tail_pats)
        for (std::size_t i = 0; i < n_mrp; ++i)
            t[i] = static_cast<Letter>(rep_min + rng.next_categorical(q_mrp_rows[i]));
    cb.patterns.reserve(cover.codewords.size() * tails);
    Pattern ranked(cover.n_c + n_mrp);
    for (const auto& cw : cover.codewords)
        for (const auto& tail : tail_pats) {
            std::copy(cw.begin(), cw.end(), ranked.begin());
            std::copy(tail.begin(), tail.end(), ranked.begin() + cover.n_c);
            cb.patterns.push_back(apply_sigma_inv(ranked, sigma));
        }
    return cb;
}

enum class ReferenceKind { gmd, sed };

// GMD: erase 0, 2, 4, ..., d_min-1 least reliable positions. SED(l, f):
// every even-size erasure subset (<= f) within the l least reliable
// positions. Letters are the conventional {0 = erase, 1 = hard decision}.
inline Codebook reference_codebook(ReferenceKind kind, const RSCode& code,
                                   const std::vector<int>& sigma, int sed_l = 0, int sed_f = 0) {
    Codebook cb;
    const int n = code.n();
    if (kind == ReferenceKind::gmd) {
        if (code.d_min() % 2 == 0) throw UsageError("GMD codebook assumes odd d_min");
        cb.provenance = "gmd";
        for (int e = 0; e <= code.d_min() - 1; e += 2) {
            Pattern ranked(n, 1);
            for (int r = 0; r < e; ++r) ranked[r] = 0;
            cb.patterns.push_back(apply_sigma_inv(ranked, sigma));
        }
    } else {
        if (sed_l < 1 || sed_f < 0 || sed_f > sed_l || sed_l > n)
            throw UsageError("SED(l, f) needs 1 <= l <= N and 0 <= f <= l");
        cb.provenance = "sed";
        for (int w = 0; w <= sed_f; w += 2) {
            // even-weight subsets of the l LRPs in lexicographic order
            std::vector<int> idx(w);
            for (int i = 0; i < w; ++i) idx[i] = i;
            while (true) {
                Pattern ranked(n, 1);
                for (int i : idx) ranked[i] = 0;
                cb.patterns.push_back(apply_sigma_inv(ranked, sigma));
                if (w == 0) break;
                int pos = w - 1;
                while (pos >= 0 && idx[pos] == sed_l - w + pos) --pos;
                if (pos < 0) break;
                ++idx[pos];
                for (int i = pos + 1; i < w; ++i) idx[i] = idx[i - 1] + 1;
            }
        }
    }
    cb.rate = std::log2(static_cast<double>(cb.patterns.size()));
    return cb;
}

// Possible and best-exponent ranges of the Condition-2 integer a.
struct ARanges {
    int possible_lo = 0, possible_hi = 0;
    int best_lo = 0, best_hi = 0;
};

inline double a_fdec_bound(const RSCode& code, int mu) {
    double theta = static_cast<double>(code.n()) / (code.k() - 1);
    return 0.5 * (std::sqrt(1.0 + 4.0 * theta * mu * (mu + 1.0)) - 3.0);
}

inline ARanges a_ranges(const RSCode& code, int mu) {
    if (code.k() < 2) throw UsageError("a_ranges needs K >= 2");
    double theta = static_cast<double>(code.n()) / (code.k() - 1);
    ARanges out;
    out.possible_lo = out.best_lo = mu;
    double hi = mu * theta - 0.5 + std::sqrt(mu * mu * theta * (theta - 1.0) + 0.25);
    out.possible_hi = static_cast<int>(std::ceil(hi)) - 1;
    out.best_hi = static_cast<int>(std::floor(a_fdec_bound(code, mu))) + 1;
    return out;
}

// E[S_M] = sum_k sum_j sum_i m_{j,k} p_{i,j} q_{i,k} for patterns drawn
// independently from Q.
inline double expected_score(const SourceDist& P, const std::vector<std::vector<double>>& q_rows,
                             const std::vector<MultiplicityType>& types) {
    double acc = 0.0;
    for (size_t i = 0; i < P.p.size(); ++i)
        for (size_t k = 0; k < types.size(); ++k) {
            const auto& t = types[k];
            double inner = 0.0;
            for (size_t j = 0; j < t.m.size(); ++j) inner += t.m[j] * P.p[i][j + 1];
            acc += inner * q_rows[i][k];
        }
    return acc;
}

struct HeuristicA {
    int a = 0;
    bool exhausted = false;  // no a in range satisfied the ceiling test
};

// Walk a upward from mu, solving the (R, D_a) problem under Delta_a and
// stopping when the expected score lands in a's score interval.
template <class SolveQ>
HeuristicA heuristic_a_impl(const SourceDist& P, const RSCode& code, int mu, int ell,
                            const std::vector<MultiplicityType>& types, bool relaxed,
                            SolveQ&& solve_q) {
    HeuristicA out;
    const int hi = a_ranges(code, mu).possible_hi;
    for (int a = mu; a <= hi; ++a) {
        SchemeSpec scheme{SchemeKind::asd, ell, mu, a, relaxed, types};
        auto spec = build_spec(scheme, code);
        auto q_rows = solve_q(spec);
        double escore = expected_score(P, q_rows, spec.types);
        if (static_cast<int>(std::ceil(escore / (code.k() - 1))) == a + 1) {
            out.a = a;
            return out;
        }
    }
    out.a = hi;
    out.exhausted = true;
    return out;
}

inline void save_codebook(const Codebook& cb, std::ostream& os) {
    os << "# " << cb.provenance << ' ' << fmt_g9(cb.rate) << ' ' << cb.seed << '\n';
    for (const auto& pat : cb.patterns) {
        for (size_t i = 0; i < pat.size(); ++i) {
            if (i) os << ' ';
            os << static_cast<int>(pat[i]);
        }
        os << '\n';
    }
}

inline Codebook load_codebook(std::istream& is) {
    Codebook cb;
    std::string line;
    if (!std::getline(is, line) || line.empty() || line[0] != '#')
        throw UsageError("codebook file must start with '# scheme rate seed'");
    {
        std::istringstream ss(line.substr(1));
        ss >> cb.provenance >> cb.rate >> cb.seed;
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        Pattern pat;
        int v;
        while (ss >> v) pat.push_back(static_cast<Letter>(v));
        cb.patterns.push_back(std::move(pat));
    }
    return cb;
}

}  // namespace rsrd

#endif

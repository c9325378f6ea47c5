#ifndef RSRD_DISTORTION_HPP
#define RSRD_DISTORTION_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

#include "rsrd/rs.hpp"

namespace rsrd {

// Pattern letters. Error patterns: 0 = none of the tracked candidates is
// correct, j >= 1 = the j-th most likely symbol is correct. Erasure
// patterns: 0 = erase (mbm/bit schemes), k >= 1 = hard-decide on the k-th
// candidate, or (ASD) use multiplicity type k.
using Letter = std::uint8_t;
using Pattern = std::vector<Letter>;

struct MultiplicityType {
    std::vector<int> m;  // m_1..m_ell

    int total() const { return std::accumulate(m.begin(), m.end(), 0); }
    bool operator==(const MultiplicityType& o) const { return m == o.m; }
};

// Allowable multiplicity types for top-ell decoding with maximum
// multiplicity mu: sum m_j <= mu and
//   sum m_j (mu - m_j) <= (mu+1) (|{j: m_j != 0}| - 1) min_{j: m_j != 0} m_j,
// with min over an empty support taken as 0. Type 1 is (mu, 0, ..., 0);
// the rest are listed lexicographically descending.
inline bool is_allowable(const MultiplicityType& t, int mu) {
    int sum = 0, lhs = 0, support = 0, minpos = mu + 1;
    for (int mj : t.m) {
        sum += mj;
        lhs += mj * (mu - mj);
        if (mj != 0) {
            ++support;
            minpos = std::min(minpos, mj);
        }
    }
    if (support == 0) minpos = 0;
    if (sum > mu) return false;
    return lhs <= (mu + 1) * (support - 1) * minpos;
}

inline std::vector<MultiplicityType> allowable_set(int mu, int ell) {
    if (mu < 1 || ell < 1) throw UsageError("allowable_set: need mu >= 1, ell >= 1");
    std::vector<MultiplicityType> out;
    MultiplicityType cur;
    cur.m.assign(ell, 0);
    // enumerate all tuples with entries in [0, mu]
    while (true) {
        if (is_allowable(cur, mu)) out.push_back(cur);
        int pos = ell - 1;
        while (pos >= 0 && cur.m[pos] == mu) cur.m[pos--] = 0;
        if (pos < 0) break;
        ++cur.m[pos];
    }
    MultiplicityType type1;
    type1.m.assign(ell, 0);
    type1.m[0] = mu;
    std::sort(out.begin(), out.end(), [&](const MultiplicityType& a, const MultiplicityType& b) {
        if (a == type1) return !(b == type1);
        if (b == type1) return false;
        return a.m > b.m;
    });
    return out;
}

// Relaxed set A0 restricted to the pair types used by mASD0-mu:
// (0,...,0) plus every (m1, m2) with m1 + m2 = mu (ell = 2).
inline std::vector<MultiplicityType> relaxed_pair_types(int mu) {
    std::vector<MultiplicityType> out;
    out.push_back({{mu, 0}});
    for (int m1 = mu - 1; m1 >= 0; --m1) out.push_back({{m1, mu - m1}});
    out.push_back({{0, 0}});
    return out;
}

enum class SchemeKind { mbm, bit_asd, errors_only, asd };

struct SchemeSpec {
    SchemeKind kind = SchemeKind::mbm;
    int ell = 1;                          // candidates tracked per position
    int mu = 0;                           // max multiplicity (asd)
    int a = 0;                            // Lagrange integer; 0 means a = mu
    bool relaxed = false;                 // permit types outside the allowable set
    std::vector<MultiplicityType> types;  // asd column types; empty -> allowable_set(mu, ell)

    static SchemeSpec mbm_l(int ell) { return {SchemeKind::mbm, ell}; }
    static SchemeSpec bit_level() { return {SchemeKind::bit_asd, 1}; }
    static SchemeSpec errors_only_l(int ell) { return {SchemeKind::errors_only, ell}; }
    static SchemeSpec masd(int mu, int a = 0) {
        SchemeSpec s{SchemeKind::asd, mu, mu, a};
        return s;
    }
};

// Letter-by-letter distortion measure plus the success threshold: one
// decoding trial succeeds iff d(x, xhat) < d_thresh. ASD entries are kept
// both as doubles and as exact numerators over den = a(a+1), because the
// threshold comparisons are exact statements about integers.
struct DistortionSpec {
    SchemeKind kind;
    int ell = 1;
    int mu = 0;
    int a = 0;
    int src_size = 2;   // |X|
    int rep_min = 0;    // smallest reproduction letter
    int rep_size = 2;   // |Xhat|
    std::vector<double> delta;  // src_size x rep_size, row-major
    double d_thresh = 0.0;
    std::vector<std::int64_t> delta_num;
    std::int64_t thresh_num = 0;
    std::int64_t den = 1;
    std::vector<MultiplicityType> types;  // asd only

    double at(int x, int xhat) const {
        return delta[static_cast<size_t>(x) * rep_size + (xhat - rep_min)];
    }
    std::int64_t num_at(int x, int xhat) const {
        return delta_num[static_cast<size_t>(x) * rep_size + (xhat - rep_min)];
    }
    int rep_count() const { return rep_size; }
};

inline DistortionSpec build_spec(const SchemeSpec& scheme, const RSCode& code) {
    DistortionSpec spec;
    spec.kind = scheme.kind;
    const int dmin = code.d_min();
    switch (scheme.kind) {
        case SchemeKind::mbm: {
            const int ell = scheme.ell;
            if (ell < 1 || ell >= static_cast<int>(code.field().size()))
                throw UsageError("mbm: need 1 <= ell < m");
            spec.ell = ell;
            spec.src_size = ell + 1;
            spec.rep_min = 0;
            spec.rep_size = ell + 1;
            spec.delta.assign(static_cast<size_t>(ell + 1) * (ell + 1), 2.0);
            for (int j = 0; j <= ell; ++j) spec.delta[static_cast<size_t>(j) * (ell + 1)] = 1.0;
            for (int j = 1; j <= ell; ++j) spec.delta[static_cast<size_t>(j) * (ell + 1) + j] = 0.0;
            spec.d_thresh = dmin;
            spec.den = 1;
            spec.thresh_num = dmin;
            break;
        }
        case SchemeKind::bit_asd: {
            spec.ell = 1;
            spec.src_size = 2;
            spec.rep_min = 0;
            spec.rep_size = 2;
            spec.delta = {1.0, 3.0, 1.0, 0.0};
            spec.d_thresh = 1.5 * dmin;
            spec.den = 2;
            spec.thresh_num = 3LL * dmin;
            break;
        }
        case SchemeKind::errors_only: {
            const int ell = scheme.ell;
            if (ell < 1) throw UsageError("errors_only: need ell >= 1");
            spec.ell = ell;
            spec.src_size = ell + 1;
            spec.rep_min = 1;
            spec.rep_size = ell;
            spec.delta.assign(static_cast<size_t>(ell + 1) * ell, 1.0);
            for (int j = 1; j <= ell; ++j) spec.delta[static_cast<size_t>(j) * ell + (j - 1)] = 0.0;
            spec.d_thresh = 0.5 * dmin;
            spec.den = 2;
            spec.thresh_num = dmin;
            break;
        }
        case SchemeKind::asd: {
            const int mu = scheme.mu;
            if (mu < 1) throw UsageError("asd: need mu >= 1");
            const int a = scheme.a > 0 ? scheme.a : mu;
            if (a < mu) throw UsageError("asd: a must satisfy a >= mu");
            auto types = scheme.types;
            int ell = scheme.ell > 0 ? scheme.ell : mu;
            if (types.empty()) types = allowable_set(mu, ell);
            ell = static_cast<int>(types.front().m.size());
            for (const auto& t : types) {
                if (static_cast<int>(t.m.size()) != ell)
                    throw UsageError("asd: inconsistent type lengths");
                if (t.total() > mu) throw UsageError("asd: type exceeds total multiplicity mu");
                if (!scheme.relaxed && !is_allowable(t, mu))
                    throw UsageError("asd: type outside the allowable set (pass relaxed to permit)");
            }
            MultiplicityType type1;
            type1.m.assign(ell, 0);
            type1.m[0] = mu;
            if (!(types.front() == type1))
                throw UsageError("asd: type 1 must be (mu, 0, ..., 0)");
            const int T = static_cast<int>(types.size());
            spec.ell = ell;
            spec.mu = mu;
            spec.a = a;
            spec.src_size = ell + 1;
            spec.rep_min = 1;
            spec.rep_size = T;
            spec.types = types;
            spec.den = static_cast<std::int64_t>(a) * (a + 1);
            spec.delta.resize(static_cast<size_t>(ell + 1) * T);
            spec.delta_num.resize(spec.delta.size());
            for (int k = 0; k < T; ++k) {
                std::int64_t rho_num = static_cast<std::int64_t>(mu) * (2 * a + 1 - mu);
                for (int mj : types[k].m) rho_num += static_cast<std::int64_t>(mj) * (mj + 1);
                for (int j = 0; j <= ell; ++j) {
                    std::int64_t num = rho_num;
                    if (j >= 1) num -= 2LL * types[k].m[j - 1] * (a + 1);
                    spec.delta_num[static_cast<size_t>(j) * T + k] = num;
                    spec.delta[static_cast<size_t>(j) * T + k] =
                        static_cast<double>(num) / static_cast<double>(spec.den);
                }
            }
            spec.thresh_num = static_cast<std::int64_t>(mu) * (2 * a + 1 - mu) * code.n() -
                              static_cast<std::int64_t>(code.k() - 1) * spec.den;
            spec.d_thresh = static_cast<double>(spec.thresh_num) / static_cast<double>(spec.den);
            break;
        }
    }
    if (spec.delta_num.empty()) {
        spec.delta_num.resize(spec.delta.size());
        for (size_t i = 0; i < spec.delta.size(); ++i)
            spec.delta_num[i] = static_cast<std::int64_t>(spec.delta[i] * static_cast<double>(spec.den) + 0.5);
    }
    for (double v : spec.delta)
        if (v < 0.0) throw UsageError("distortion entries must be nonnegative");
    return spec;
}

inline double distortion(const Pattern& x, const Pattern& xhat, const DistortionSpec& spec) {
    if (x.size() != xhat.size()) throw UsageError("distortion: pattern lengths differ");
    double acc = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] >= spec.src_size || xhat[i] < spec.rep_min ||
            xhat[i] >= spec.rep_min + spec.rep_size)
            throw UsageError("distortion: letter outside the scheme alphabet");
        acc += spec.at(x[i], xhat[i]);
    }
    return acc;
}

// Exact numerator of the distortion over spec.den; trial success is
// distortion_num < thresh_num.
inline std::int64_t distortion_num(const Pattern& x, const Pattern& xhat,
                                   const DistortionSpec& spec) {
    std::int64_t acc = 0;
    for (size_t i = 0; i < x.size(); ++i) acc += spec.num_at(x[i], xhat[i]);
    return acc;
}

inline bool trial_success(const Pattern& x, const Pattern& xhat, const DistortionSpec& spec) {
    return distortion_num(x, xhat, spec) < spec.thresh_num;
}

// Per-position probabilities of the error-pattern letters. Rows are
// codeword positions (or bit positions, length N*eta, for the bit-level
// scheme); columns follow the scheme's source alphabet.
struct SourceDist {
    SchemeKind kind = SchemeKind::mbm;
    int ell = 1;
    bool reliability_order = false;  // rows sorted least-reliable first
    std::vector<std::vector<double>> p;

    int rows() const { return static_cast<int>(p.size()); }
};

// D_max = sum_i min_k sum_j p_{i,j} delta_{j,k}: the distortion attainable
// with a single (deterministic) erasure pattern, i.e. the R = 0 endpoint.
inline double d_max(const SourceDist& P, const DistortionSpec& spec) {
    double acc = 0.0;
    for (const auto& row : P.p) {
        if (static_cast<int>(row.size()) != spec.src_size)
            throw UsageError("d_max: source/spec alphabet mismatch");
        double best = 0.0;
        for (int k = 0; k < spec.rep_size; ++k) {
            double v = 0.0;
            for (int j = 0; j < spec.src_size; ++j)
                v += row[j] * spec.delta[static_cast<size_t>(j) * spec.rep_size + k];
            if (k == 0 || v < best) best = v;
        }
        acc += best;
    }
    return acc;
}

// argmin letters of the R = 0 pattern (ties to the smaller letter)
inline Pattern d_max_letters(const SourceDist& P, const DistortionSpec& spec) {
    Pattern out;
    out.reserve(P.p.size());
    for (const auto& row : P.p) {
        int best_k = 0;
        double best = 0.0;
        for (int k = 0; k < spec.rep_size; ++k) {
            double v = 0.0;
            for (int j = 0; j < spec.src_size; ++j)
                v += row[j] * spec.delta[static_cast<size_t>(j) * spec.rep_size + k];
            if (k == 0 || v < best) {
                best = v;
                best_k = k;
            }
        }
        out.push_back(static_cast<Letter>(best_k + spec.rep_min));
    }
    return out;
}

// Joint letter counts chi_{j,k} plus the derived erasure/error statistics
// of the conventional and generalized schemes.
struct PatternStats {
    int src_size = 0, rep_min = 0, rep_size = 0;
    std::vector<int> chi;  // src_size x rep_size

    static PatternStats from(const Pattern& x, const Pattern& xhat, const DistortionSpec& spec) {
        PatternStats st;
        st.src_size = spec.src_size;
        st.rep_min = spec.rep_min;
        st.rep_size = spec.rep_size;
        st.chi.assign(static_cast<size_t>(spec.src_size) * spec.rep_size, 0);
        for (size_t i = 0; i < x.size(); ++i)
            ++st.chi[static_cast<size_t>(x[i]) * spec.rep_size + (xhat[i] - spec.rep_min)];
        return st;
    }

    int chi_at(int j, int k) const {
        return chi[static_cast<size_t>(j) * rep_size + (k - rep_min)];
    }
    int e_k(int k) const {
        int acc = 0;
        for (int j = 0; j < src_size; ++j) acc += chi_at(j, k);
        return acc;
    }
    int nu_at(int j, int k) const { return e_k(k) - chi_at(j, k); }

    // erasure count: reproduction letter 0 (mbm / bit-level schemes)
    int erasures() const { return rep_min == 0 ? e_k(0) : 0; }
    // symbol errors in unerased positions: hard decision k >= 1 but x != k
    int errors() const {
        int acc = 0;
        for (int k = std::max(1, rep_min); k < rep_min + rep_size; ++k)
            for (int j = 0; j < src_size; ++j)
                if (j != k) acc += chi_at(j, k);
        return acc;
    }
};

// m x N multiplicity matrix induced by an ASD erasure pattern: column i
// places m_{j,k} on the j-th most likely symbol at position i, where
// k = xhat_i. `ranked` gives, per position, the symbols in decreasing
// reliability order (values are field elements used as row indices).
inline std::vector<int> multiplicity_matrix(const Pattern& xhat,
                                            const std::vector<MultiplicityType>& types,
                                            const std::vector<std::vector<gf_elem>>& ranked,
                                            int m) {
    const int n = static_cast<int>(xhat.size());
    std::vector<int> mat(static_cast<size_t>(m) * n, 0);
    for (int i = 0; i < n; ++i) {
        if (xhat[i] < 1 || xhat[i] > types.size())
            throw UsageError("multiplicity_matrix: letter does not index a type");
        const auto& t = types[xhat[i] - 1];
        for (size_t j = 0; j < t.m.size(); ++j)
            if (t.m[j] > 0) mat[static_cast<size_t>(ranked[i][j]) * n + i] = t.m[j];
    }
    return mat;
}

// Bit-level multiplicity assignment: per symbol position, multiplicity 2
// on the symbol when none of its bits is erased, 1 on each of the two
// candidates when one bit is erased, an all-zero column otherwise.
inline std::vector<int> multiplicity_matrix_bit(const Pattern& bhat,
                                                const std::vector<gf_elem>& hd_symbols,
                                                int eta, int m) {
    const int n = static_cast<int>(hd_symbols.size());
    if (static_cast<int>(bhat.size()) != n * eta)
        throw UsageError("multiplicity_matrix_bit: pattern length must be N*eta");
    std::vector<int> mat(static_cast<size_t>(m) * n, 0);
    for (int i = 0; i < n; ++i) {
        int erased = -1, count = 0;
        for (int b = 0; b < eta; ++b) {
            if (bhat[static_cast<size_t>(i) * eta + b] == 0) {
                erased = b;
                ++count;
            }
        }
        if (count == 0) {
            mat[static_cast<size_t>(hd_symbols[i]) * n + i] = 2;
        } else if (count == 1) {
            gf_elem s0 = hd_symbols[i];
            gf_elem s1 = s0 ^ static_cast<gf_elem>(1u << erased);
            mat[static_cast<size_t>(s0) * n + i] = 1;
            mat[static_cast<size_t>(s1) * n + i] = 1;
        }
    }
    return mat;
}

inline void save_spec_csv(const DistortionSpec& spec, std::ostream& os) {
    os << "row_letter,col_letter,delta\n";
    for (int j = 0; j < spec.src_size; ++j)
        for (int k = spec.rep_min; k < spec.rep_min + spec.rep_size; ++k)
            os << j << ',' << k << ',' << fmt_g9(spec.at(j, k)) << '\n';
}

struct ScoreCost {
    std::int64_t score = 0;
    std::int64_t cost = 0;  // C_M is always an integer: sum M(M+1)/2
};

inline ScoreCost score_cost(const std::vector<int>& mat, int m, int n,
                            const std::vector<gf_elem>& codeword) {
    ScoreCost sc;
    for (int i = 0; i < n; ++i) sc.score += mat[static_cast<size_t>(codeword[i]) * n + i];
    for (int v : mat) sc.cost += static_cast<std::int64_t>(v) * (v + 1);
    sc.cost /= 2;
    return sc;
}

// ASD success oracle: the transmitted codeword is on the list iff
// (a+1)[S - a(K-1)/2] > C at the unique integer a with
// a(K-1) < S <= (a+1)(K-1). Zero score can never succeed.
inline bool asd_success(const ScoreCost& sc, const RSCode& code) {
    if (sc.score <= 0) return false;
    const std::int64_t km1 = code.k() - 1;
    std::int64_t a = (sc.score + km1 - 1) / km1 - 1;  // ceil(S/(K-1)) - 1
    return (a + 1) * (2 * sc.score - a * km1) > 2 * sc.cost;
}

// Score and cost of a type-based ASD trial straight from the patterns,
// bypassing the explicit matrix: the correct symbol at position i is the
// x_i-th candidate, so it receives multiplicity m_{x_i, k}.
inline ScoreCost score_cost_from_patterns(const Pattern& x, const Pattern& xhat,
                                          const std::vector<MultiplicityType>& types,
                                          const std::vector<std::int64_t>& type_cost2) {
    ScoreCost sc;
    std::int64_t cost2 = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        const auto& t = types[xhat[i] - 1];
        if (x[i] >= 1 && x[i] <= t.m.size()) sc.score += t.m[x[i] - 1];
        cost2 += type_cost2[xhat[i] - 1];
    }
    sc.cost = cost2 / 2;
    return sc;
}

// per-type 2*cost contribution: sum_j m_j (m_j + 1)
inline std::vector<std::int64_t> type_cost2_table(const std::vector<MultiplicityType>& types) {
    std::vector<std::int64_t> out;
    out.reserve(types.size());
    for (const auto& t : types) {
        std::int64_t acc = 0;
        for (int mj : t.m) acc += static_cast<std::int64_t>(mj) * (mj + 1);
        out.push_back(acc);
    }
    return out;
}

}  // namespace rsrd

#endif

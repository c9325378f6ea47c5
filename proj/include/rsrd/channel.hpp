#ifndef RSRD_CHANNEL_HPP
#define RSRD_CHANNEL_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "rsrd/distortion.hpp"
#include "rsrd/rng.hpp"
#include "rsrd/rs.hpp"

namespace rsrd {

// Posterior symbol probabilities per codeword position plus the two
// sorting permutations: phi[i] ranks the symbols of position i by
// decreasing probability, sigma ranks the positions by increasing
// top-symbol probability (sigma[0] is the least reliable position).
// Bit-level marginals are derived from pi for the bit-level schemes.
struct ReliabilityMatrix {
    int m = 0, n = 0, eta = 0;
    std::vector<double> pi;                  // m x n, pi[v * n + i]
    std::vector<std::vector<gf_elem>> phi;   // phi[i][r] = r-th most likely symbol value
    std::vector<int> sigma;                  // sigma[r] = position of rank-r LRP
    std::vector<Letter> bit_hd;              // n * eta, LSB-first per symbol
    std::vector<double> bit_correct;         // n * eta, Pr(hd bit is correct)

    double prob(int symbol, int pos) const { return pi[static_cast<size_t>(symbol) * n + pos]; }
    double top_prob(int pos) const { return prob(phi[pos][0], pos); }
    gf_elem ranked(int pos, int rank) const { return phi[pos][rank]; }
};

enum class SnrRef { ebn0_db, esn0_db };

// Build a reliability matrix from raw posterior columns (normalized here).
inline ReliabilityMatrix reliability_from_pi(std::vector<double> pi, int m, int n, int eta);

struct ChannelSpec {
    enum class Kind { awgn_bpsk, awgn_mqam, msc };
    Kind kind = Kind::awgn_bpsk;
    double param = 0.0;  // SNR in dB for AWGN, correct-symbol probability for m-SC
    SnrRef snr_ref = SnrRef::ebn0_db;
};

namespace detail {

// Sorts phi (ties: ascending symbol value) and sigma (ties: ascending
// position), then fills the bit-level marginals.
inline void finalize_reliability(ReliabilityMatrix& rel) {
    const int m = rel.m, n = rel.n, eta = rel.eta;
    rel.phi.assign(n, {});
    for (int i = 0; i < n; ++i) {
        auto& order = rel.phi[i];
        order.resize(m);
        for (int v = 0; v < m; ++v) order[v] = static_cast<gf_elem>(v);
        std::sort(order.begin(), order.end(), [&](gf_elem a, gf_elem b) {
            double pa = rel.prob(a, i), pb = rel.prob(b, i);
            if (pa != pb) return pa > pb;
            return a < b;
        });
    }
    rel.sigma.resize(n);
    std::iota(rel.sigma.begin(), rel.sigma.end(), 0);
    std::stable_sort(rel.sigma.begin(), rel.sigma.end(),
                     [&](int a, int b) { return rel.top_prob(a) < rel.top_prob(b); });

    rel.bit_hd.assign(static_cast<size_t>(n) * eta, 0);
    rel.bit_correct.assign(static_cast<size_t>(n) * eta, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int b = 0; b < eta; ++b) {
            double p1 = 0.0;
            for (int v = 0; v < m; ++v)
                if (v & (1 << b)) p1 += rel.prob(v, i);
            bool hd = p1 >= 0.5;
            rel.bit_hd[static_cast<size_t>(i) * eta + b] = hd ? 1 : 0;
            rel.bit_correct[static_cast<size_t>(i) * eta + b] = hd ? p1 : 1.0 - p1;
        }
    }
}

// exp-normalize one position's symbol log-likelihoods into pi
inline void lognorm_column(ReliabilityMatrix& rel, int pos, const std::vector<double>& ll) {
    double mx = ll[0];
    for (double v : ll) mx = std::max(mx, v);
    double sum = 0.0;
    for (int v = 0; v < rel.m; ++v) {
        double e = std::exp(ll[v] - mx);
        if (e < 1e-300) e = 1e-300;
        rel.pi[static_cast<size_t>(v) * rel.n + pos] = e;
        sum += e;
    }
    for (int v = 0; v < rel.m; ++v) rel.pi[static_cast<size_t>(v) * rel.n + pos] /= sum;
}

struct QamMap {
    int side = 0;
    double scale = 1.0;
    std::vector<double> amp;  // amplitude per axis index (after Gray decoding)

    explicit QamMap(int eta) {
        if (eta % 2 != 0) throw UsageError("m-QAM needs an even number of bits per symbol");
        side = 1 << (eta / 2);
        // unit average symbol energy across the square constellation
        double acc = 0.0;
        for (int g = 0; g < side; ++g) {
            double a = 2.0 * g - (side - 1);
            acc += a * a;
        }
        scale = 1.0 / std::sqrt(2.0 * acc / side);
        amp.resize(side);
        for (int g = 0; g < side; ++g) {
            int label = g ^ (g >> 1);  // Gray label of grid index g
            amp[label] = (2.0 * g - (side - 1)) * scale;
        }
    }

    // I from the high half of the bits, Q from the low half
    std::pair<double, double> point(int value, int eta) const {
        int vi = value >> (eta / 2);
        int vq = value & (side - 1);
        return {amp[vi], amp[vq]};
    }
};

}  // namespace detail

inline ReliabilityMatrix reliability_from_pi(std::vector<double> pi, int m, int n, int eta) {
    ReliabilityMatrix rel;
    rel.m = m;
    rel.n = n;
    rel.eta = eta;
    rel.pi = std::move(pi);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int v = 0; v < m; ++v) s += rel.pi[static_cast<size_t>(v) * n + i];
        if (!(s > 0.0)) throw UsageError("posterior column sums must be positive");
        for (int v = 0; v < m; ++v) rel.pi[static_cast<size_t>(v) * n + i] /= s;
    }
    detail::finalize_reliability(rel);
    return rel;
}

// AWGN with BPSK (one +-1 channel use per bit) or square m-QAM (one 2-D
// use per symbol). The noise level is set from E_b/N_0 or E_s/N_0 in dB
// with the code rate K/N accounted for.
inline ReliabilityMatrix simulate_awgn(const RSCode& code, const std::vector<gf_elem>& codeword,
                                       ChannelSpec::Kind mod, double snr_db, SnrRef ref,
                                       Rng& rng) {
    const auto& gf = code.field();
    const int m = static_cast<int>(gf.size());
    const int n = code.n(), eta = gf.eta();
    const double rate = static_cast<double>(code.k()) / code.n();
    const double snr_lin = std::pow(10.0, snr_db / 10.0);

    ReliabilityMatrix rel;
    rel.m = m;
    rel.n = n;
    rel.eta = eta;
    rel.pi.assign(static_cast<size_t>(m) * n, 0.0);

    if (mod == ChannelSpec::Kind::awgn_bpsk) {
        // unit-energy coded bits; E_b/N_0 folds in the code rate
        double esn0 = (ref == SnrRef::ebn0_db) ? snr_lin * rate : snr_lin;
        double sigma2 = 1.0 / (2.0 * esn0);
        if (!(sigma2 > 0.0)) throw UsageError("noise variance must be positive");
        double sigma = std::sqrt(sigma2);
        std::vector<double> ll(m), bit_ll0(eta), bit_ll1(eta);
        for (int i = 0; i < n; ++i) {
            for (int b = 0; b < eta; ++b) {
                double tx = (codeword[i] >> b) & 1 ? -1.0 : 1.0;
                double y = tx + sigma * rng.next_gaussian();
                bit_ll0[b] = -(y - 1.0) * (y - 1.0) / (2.0 * sigma2);
                bit_ll1[b] = -(y + 1.0) * (y + 1.0) / (2.0 * sigma2);
            }
            for (int v = 0; v < m; ++v) {
                double acc = 0.0;
                for (int b = 0; b < eta; ++b) acc += (v >> b) & 1 ? bit_ll1[b] : bit_ll0[b];
                ll[v] = acc;
            }
            detail::lognorm_column(rel, i, ll);
        }
    } else if (mod == ChannelSpec::Kind::awgn_mqam) {
        detail::QamMap map(eta);
        double esn0 = (ref == SnrRef::ebn0_db) ? snr_lin * rate * eta : snr_lin;
        double sigma2 = 1.0 / (2.0 * esn0);  // per real dimension
        if (!(sigma2 > 0.0)) throw UsageError("noise variance must be positive");
        double sigma = std::sqrt(sigma2);
        std::vector<double> ll(m);
        for (int i = 0; i < n; ++i) {
            auto [si, sq] = map.point(codeword[i], eta);
            double yi = si + sigma * rng.next_gaussian();
            double yq = sq + sigma * rng.next_gaussian();
            for (int v = 0; v < m; ++v) {
                auto [ci, cq] = map.point(v, eta);
                double d2 = (yi - ci) * (yi - ci) + (yq - cq) * (yq - cq);
                ll[v] = -d2 / (2.0 * sigma2);
            }
            detail::lognorm_column(rel, i, ll);
        }
    } else {
        throw UsageError("simulate_awgn: not an AWGN channel kind");
    }
    detail::finalize_reliability(rel);
    return rel;
}

// m-ary symmetric channel: the received symbol equals the transmitted one
// with probability p, otherwise it is uniform over the other m-1 symbols.
inline ReliabilityMatrix simulate_msc(const RSCode& code, const std::vector<gf_elem>& codeword,
                                      double p, Rng& rng) {
    const auto& gf = code.field();
    const int m = static_cast<int>(gf.size());
    const int n = code.n();
    if (!(p > 1.0 / m && p <= 1.0))
        throw UsageError("m-SC requires p in (1/m, 1]");
    ReliabilityMatrix rel;
    rel.m = m;
    rel.n = n;
    rel.eta = gf.eta();
    rel.pi.assign(static_cast<size_t>(m) * n, 0.0);
    const double off = (1.0 - p) / (m - 1);
    for (int i = 0; i < n; ++i) {
        gf_elem r = codeword[i];
        if (rng.next_double() >= p) {
            std::uint64_t shift = 1 + rng.next_below(m - 1);
            r = static_cast<gf_elem>((codeword[i] + shift) % m);
        }
        for (int v = 0; v < m; ++v)
            rel.pi[static_cast<size_t>(v) * n + i] = (v == r) ? p : off;
    }
    detail::finalize_reliability(rel);
    return rel;
}

inline ReliabilityMatrix simulate(const RSCode& code, const std::vector<gf_elem>& codeword,
                                  const ChannelSpec& ch, Rng& rng) {
    switch (ch.kind) {
        case ChannelSpec::Kind::msc:
            return simulate_msc(code, codeword, ch.param, rng);
        default:
            return simulate_awgn(code, codeword, ch.kind, ch.param, ch.snr_ref, rng);
    }
}

// Error pattern of a frame: which candidate (if any) is correct at each
// position, or the per-bit correctness indicator for the bit-level scheme.
inline Pattern extract_error_pattern(const ReliabilityMatrix& rel,
                                     const std::vector<gf_elem>& transmitted,
                                     SchemeKind kind, int ell) {
    if (kind == SchemeKind::bit_asd) {
        Pattern x(static_cast<size_t>(rel.n) * rel.eta, 0);
        for (int i = 0; i < rel.n; ++i)
            for (int b = 0; b < rel.eta; ++b) {
                Letter tx = (transmitted[i] >> b) & 1;
                x[static_cast<size_t>(i) * rel.eta + b] =
                    rel.bit_hd[static_cast<size_t>(i) * rel.eta + b] == tx ? 1 : 0;
            }
        return x;
    }
    Pattern x(rel.n, 0);
    for (int i = 0; i < rel.n; ++i)
        for (int r = 0; r < ell; ++r)
            if (rel.phi[i][r] == transmitted[i]) {
                x[i] = static_cast<Letter>(r + 1);
                break;
            }
    return x;
}

// Per-frame source distribution (Algorithm A): row i gives the letter
// probabilities of the error pattern at position i, read off the
// posterior. reliability_order permutes rows by sigma (Algorithm B).
inline SourceDist source_dist(const ReliabilityMatrix& rel, SchemeKind kind, int ell,
                              bool reliability_order = false) {
    SourceDist P;
    P.kind = kind;
    P.ell = ell;
    P.reliability_order = reliability_order;
    if (kind == SchemeKind::bit_asd) {
        const int nbits = rel.n * rel.eta;
        P.p.resize(nbits);
        for (int i = 0; i < nbits; ++i) {
            double r = rel.bit_correct[i];
            P.p[i] = {1.0 - r, r};
        }
        if (reliability_order)
            std::sort(P.p.begin(), P.p.end(),
                      [](const auto& a, const auto& b) { return a[1] < b[1]; });
        return P;
    }
    P.p.resize(rel.n);
    for (int i = 0; i < rel.n; ++i) {
        auto& row = P.p[i];
        row.assign(ell + 1, 0.0);
        double acc = 0.0;
        for (int r = 0; r < ell; ++r) {
            double v = rel.prob(rel.phi[i][r], i);
            row[r + 1] = v;
            acc += v;
        }
        row[0] = std::max(0.0, 1.0 - acc);
    }
    if (reliability_order) {
        std::vector<std::vector<double>> sorted(rel.n);
        for (int r = 0; r < rel.n; ++r) sorted[r] = P.p[rel.sigma[r]];
        P.p = std::move(sorted);
    }
    return P;
}

// Training phase of Algorithm B: averaged reliability profile over tau
// frames, stored in reliability order (columns sorted by phi, then
// positions permuted by each frame's sigma before averaging).
struct AveragedProfile {
    int m = 0, n = 0, eta = 0;
    std::vector<double> ranked;       // m x n, ranked[r * n + pos_rank]
    std::vector<double> bit_ranked;   // n * eta sorted bit-correct probabilities
};

inline AveragedProfile train_profile(const RSCode& code, const ChannelSpec& ch, int tau,
                                     std::uint64_t master_seed) {
    if (tau < 1) throw UsageError("training needs tau >= 1");
    AveragedProfile prof;
    const auto& gf = code.field();
    prof.m = static_cast<int>(gf.size());
    prof.n = code.n();
    prof.eta = gf.eta();
    prof.ranked.assign(static_cast<size_t>(prof.m) * prof.n, 0.0);
    prof.bit_ranked.assign(static_cast<size_t>(prof.n) * prof.eta, 0.0);
    std::vector<gf_elem> msg(code.k());
    for (int t = 0; t < tau; ++t) {
        Rng rng = Rng::derive(master_seed, /*stream=*/0xA16B, static_cast<std::uint64_t>(t));
        for (auto& s : msg) s = static_cast<gf_elem>(rng.next_below(gf.size()));
        auto cw = code.encode(msg);
        auto rel = simulate(code, cw, ch, rng);
        for (int rank = 0; rank < prof.n; ++rank) {
            int pos = rel.sigma[rank];
            for (int r = 0; r < prof.m; ++r)
                prof.ranked[static_cast<size_t>(r) * prof.n + rank] += rel.prob(rel.phi[pos][r], pos);
        }
        auto bits = rel.bit_correct;
        std::sort(bits.begin(), bits.end());
        for (size_t i = 0; i < bits.size(); ++i) prof.bit_ranked[i] += bits[i];
    }
    for (auto& v : prof.ranked) v /= tau;
    for (auto& v : prof.bit_ranked) v /= tau;
    return prof;
}

inline SourceDist source_dist_from_profile(const AveragedProfile& prof, SchemeKind kind,
                                           int ell) {
    SourceDist P;
    P.kind = kind;
    P.ell = ell;
    P.reliability_order = true;
    if (kind == SchemeKind::bit_asd) {
        P.p.resize(prof.bit_ranked.size());
        for (size_t i = 0; i < prof.bit_ranked.size(); ++i) {
            double r = prof.bit_ranked[i];
            P.p[i] = {1.0 - r, r};
        }
        return P;
    }
    P.p.resize(prof.n);
    for (int i = 0; i < prof.n; ++i) {
        auto& row = P.p[i];
        row.assign(ell + 1, 0.0);
        double acc = 0.0;
        for (int r = 0; r < ell; ++r) {
            double v = prof.ranked[static_cast<size_t>(r) * prof.n + i];
            row[r + 1] = v;
            acc += v;
        }
        row[0] = std::max(0.0, 1.0 - acc);
    }
    return P;
}

// Analytic source distribution of the m-SC channel: every position is
// i.i.d. with Pr(hd correct) = p; deeper candidates are uniform over the
// remaining symbols.
inline SourceDist msc_source_dist(int m, int n, double p, SchemeKind kind, int ell,
                                  int eta = 0) {
    SourceDist P;
    P.kind = kind;
    P.ell = ell;
    if (kind == SchemeKind::bit_asd) {
        // correct-bit probability of the hard-decision symbol channel
        if (eta <= 0) throw UsageError("bit-level m-SC profile needs eta");
        double r = p + (1.0 - p) * (m / 2.0 - 1.0) / (m - 1);
        P.p.assign(static_cast<size_t>(n) * eta, {1.0 - r, r});
        return P;
    }
    std::vector<double> row(ell + 1, 0.0);
    row[1] = p;
    double off = (1.0 - p) / (m - 1);
    for (int j = 2; j <= ell; ++j) row[j] = off;
    double acc = 0.0;
    for (int j = 1; j <= ell; ++j) acc += row[j];
    row[0] = std::max(0.0, 1.0 - acc);
    P.p.assign(n, row);
    return P;
}

inline void save_profile_csv(const SourceDist& P, std::ostream& os) {
    os << "position,letter,prob\n";
    for (int i = 0; i < P.rows(); ++i)
        for (size_t j = 0; j < P.p[i].size(); ++j)
            os << (i + 1) << ',' << static_cast<int>(j) << ',' << fmt_g9(P.p[i][j]) << '\n';
}

inline SourceDist load_profile_csv(std::istream& is, SchemeKind kind, int ell) {
    SourceDist P;
    P.kind = kind;
    P.ell = ell;
    std::string line;
    if (!std::getline(is, line) || line.rfind("position,letter,prob", 0) != 0)
        throw UsageError("profile CSV must start with 'position,letter,prob'");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tok;
        std::getline(ss, tok, ',');
        int pos = std::stoi(tok);
        std::getline(ss, tok, ',');
        int letter = std::stoi(tok);
        std::getline(ss, tok, ',');
        double prob = std::stod(tok);
        if (pos < 1) throw UsageError("profile CSV: positions are 1-based");
        if (static_cast<int>(P.p.size()) < pos) P.p.resize(pos);
        auto& row = P.p[pos - 1];
        if (static_cast<int>(row.size()) <= letter) row.resize(letter + 1, 0.0);
        row[letter] = prob;
    }
    for (auto& row : P.p) {
        double s = std::accumulate(row.begin(), row.end(), 0.0);
        if (std::abs(s - 1.0) > 1e-6) throw UsageError("profile CSV: rows must sum to 1");
    }
    return P;
}

}  // namespace rsrd

#endif

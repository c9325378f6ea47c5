#ifndef RSRD_RS_HPP
#define RSRD_RS_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <vector>

#include "rsrd/gf.hpp"

namespace rsrd {

struct DecodeOutcome {
    enum class Status { Codeword, Failure };
    Status status = Status::Failure;
    std::vector<gf_elem> codeword;  // valid RS codeword when status == Codeword

    bool ok() const { return status == Status::Codeword; }
};

// (N,K) Reed-Solomon code over GF(2^eta): codewords are evaluations of
// message polynomials (deg < K) at N distinct nonzero points, by default
// alpha^0..alpha^{N-1}. Decoding works on the dual-GRS syndromes
// S_j = sum_i r_i w_i beta_i^j, j = 0..N-K-1, which vanish exactly on
// codewords; this handles shortened codes (N < 2^eta - 1) uniformly.
class RSCode {
public:
    RSCode(int n, int k, std::shared_ptr<const FieldContext> field,
           std::vector<gf_elem> eval_points = {})
        : n_(n), k_(k), field_(std::move(field)), beta_(std::move(eval_points)) {
        const auto& gf = *field_;
        if (!(1 <= k_ && k_ < n_ && n_ <= static_cast<int>(gf.order())))
            throw UsageError("require 1 <= K < N <= 2^eta - 1");
        if (beta_.empty()) {
            beta_.resize(n_);
            for (int i = 0; i < n_; ++i) beta_[i] = gf.alpha_pow(i);
        }
        if (static_cast<int>(beta_.size()) != n_)
            throw UsageError("eval point count must equal N");
        for (int i = 0; i < n_; ++i)
            if (beta_[i] == 0) throw UsageError("eval points must be nonzero");
        {
            auto sorted = beta_;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw UsageError("eval points must be distinct");
        }

        // dual multipliers w_i = 1 / prod_{l != i} (beta_i - beta_l);
        // for the full-length code with beta_i = alpha^i this is just beta_i
        w_.resize(n_);
        bool full_length = (n_ == static_cast<int>(gf.order()));
        if (full_length) {
            for (int i = 0; i < n_; ++i)
                if (beta_[i] != gf.alpha_pow(i)) { full_length = false; break; }
        }
        if (full_length) {
            w_ = beta_;
        } else {
            for (int i = 0; i < n_; ++i) {
                gf_elem prod = 1;
                for (int l = 0; l < n_; ++l)
                    if (l != i) prod = gf.mul(prod, FieldContext::add(beta_[i], beta_[l]));
                w_[i] = gf.inv(prod);
            }
        }

        const int twot = n_ - k_;
        synd_exp_.resize(static_cast<size_t>(n_) * twot);
        for (int i = 0; i < n_; ++i) {
            std::uint32_t lw = gf.log(w_[i]);
            std::uint32_t lb = gf.log(beta_[i]);
            std::uint64_t acc = lw;
            for (int j = 0; j < twot; ++j) {
                synd_exp_[static_cast<size_t>(i) * twot + j] =
                    static_cast<std::uint32_t>(acc % gf.order());
                acc += lb;
            }
        }
        inv_beta_.resize(n_);
        for (int i = 0; i < n_; ++i) inv_beta_[i] = gf.inv(beta_[i]);
    }

    int n() const { return n_; }
    int k() const { return k_; }
    int d_min() const { return n_ - k_ + 1; }
    const FieldContext& field() const { return *field_; }
    std::shared_ptr<const FieldContext> field_ptr() const { return field_; }
    const std::vector<gf_elem>& eval_points() const { return beta_; }

    std::vector<gf_elem> encode(const std::vector<gf_elem>& message) const {
        if (static_cast<int>(message.size()) != k_)
            throw UsageError("message length must equal K");
        const auto& gf = *field_;
        std::vector<gf_elem> cw(n_);
        for (int i = 0; i < n_; ++i) {
            gf_elem acc = 0;
            for (int d = k_ - 1; d >= 0; --d)
                acc = FieldContext::add(gf.mul(acc, beta_[i]), message[d]);
            cw[i] = acc;
        }
        return cw;
    }

    std::vector<gf_elem> syndromes(const std::vector<gf_elem>& word) const {
        const auto& gf = *field_;
        const int twot = n_ - k_;
        std::vector<gf_elem> s(twot, 0);
        for (int i = 0; i < n_; ++i) {
            if (word[i] == 0) continue;
            std::uint32_t lr = gf.log(word[i]);
            const std::uint32_t* row = &synd_exp_[static_cast<size_t>(i) * twot];
            for (int j = 0; j < twot; ++j)
                s[j] ^= gf.antilog(lr + row[j]);
        }
        return s;
    }

    // Adds `delta` to position i of the underlying word, in syndrome space.
    void syndrome_add(std::vector<gf_elem>& s, int i, gf_elem delta) const {
        if (delta == 0) return;
        const auto& gf = *field_;
        const int twot = n_ - k_;
        std::uint32_t ld = gf.log(delta);
        const std::uint32_t* row = &synd_exp_[static_cast<size_t>(i) * twot];
        for (int j = 0; j < twot; ++j) s[j] ^= gf.antilog(ld + row[j]);
    }

    bool is_codeword(const std::vector<gf_elem>& word) const {
        auto s = syndromes(word);
        return std::all_of(s.begin(), s.end(), [](gf_elem v) { return v == 0; });
    }

    // Errors-and-erasures Berlekamp-Massey. Erasure locators are folded into
    // the initial shift register, so e > 0 and e = 0 share one path.
    DecodeOutcome bm_decode(const std::vector<gf_elem>& hd,
                            const std::vector<int>& erasures) const {
        return decode_with_syndromes(syndromes(hd), hd, erasures);
    }

    DecodeOutcome decode_with_syndromes(const std::vector<gf_elem>& synd,
                                        const std::vector<gf_elem>& hd,
                                        const std::vector<int>& erasures) const {
        const auto& gf = *field_;
        const int twot = n_ - k_;
        const int e = static_cast<int>(erasures.size());
        DecodeOutcome out;
        if (e >= d_min()) return out;  // decoding radius exhausted

        bool all_zero = std::all_of(synd.begin(), synd.end(), [](gf_elem v) { return v == 0; });
        if (all_zero && e == 0) {
            out.status = DecodeOutcome::Status::Codeword;
            out.codeword = hd;
            return out;
        }

        // erasure locator Gamma(x) = prod (1 - beta_i x)
        std::vector<gf_elem> lambda(twot + 1, 0), b_poly(twot + 1, 0);
        lambda[0] = 1;
        int deg_lambda = 0;
        for (int idx : erasures) {
            gf_elem bi = beta_[idx];
            for (int d = deg_lambda + 1; d >= 1; --d)
                lambda[d] = FieldContext::add(lambda[d], gf.mul(lambda[d - 1], bi));
            ++deg_lambda;
        }
        b_poly = lambda;
        int deg_b = deg_lambda;

        int L = e, m = 1;
        gf_elem bdisc = 1;
        for (int step = e; step < twot; ++step) {
            gf_elem disc = 0;
            for (int l = 0; l <= std::min(step, deg_lambda); ++l)
                if (lambda[l] != 0 && synd[step - l] != 0)
                    disc ^= gf.mul(lambda[l], synd[step - l]);
            if (disc == 0) {
                ++m;
                continue;
            }
            gf_elem scale = gf.div(disc, bdisc);
            if (2 * L <= step + e) {
                std::vector<gf_elem> prev = lambda;
                int prev_deg = deg_lambda;
                for (int d = 0; d + m <= twot; ++d)
                    if (b_poly[d] != 0)
                        lambda[d + m] = FieldContext::add(lambda[d + m], gf.mul(scale, b_poly[d]));
                deg_lambda = std::max(deg_lambda, std::min(deg_b + m, twot));
                while (deg_lambda > 0 && lambda[deg_lambda] == 0) --deg_lambda;
                L = step + 1 - L + e;
                b_poly = std::move(prev);
                deg_b = prev_deg;
                bdisc = disc;
                m = 1;
            } else {
                for (int d = 0; d + m <= twot; ++d)
                    if (b_poly[d] != 0)
                        lambda[d + m] = FieldContext::add(lambda[d + m], gf.mul(scale, b_poly[d]));
                deg_lambda = std::max(deg_lambda, std::min(deg_b + m, twot));
                while (deg_lambda > 0 && lambda[deg_lambda] == 0) --deg_lambda;
                ++m;
            }
        }

        if (deg_lambda != L || 2 * L > twot + e) return out;  // beyond capability

        // Chien search over the eval points
        std::vector<int> errata;
        errata.reserve(L);
        for (int i = 0; i < n_ && static_cast<int>(errata.size()) < L; ++i) {
            gf_elem x = inv_beta_[i];
            gf_elem acc = lambda[deg_lambda];
            for (int d = deg_lambda - 1; d >= 0; --d)
                acc = FieldContext::add(gf.mul(acc, x), lambda[d]);
            if (acc == 0) errata.push_back(i);
        }
        if (static_cast<int>(errata.size()) != L) return out;

        // Omega = S * Lambda mod x^{2t}, then Forney
        std::vector<gf_elem> omega(twot, 0);
        for (int j = 0; j < twot; ++j) {
            gf_elem acc = 0;
            for (int l = 0; l <= std::min(j, deg_lambda); ++l)
                if (lambda[l] != 0 && synd[j - l] != 0)
                    acc ^= gf.mul(lambda[l], synd[j - l]);
            omega[j] = acc;
        }

        std::vector<gf_elem> corrected = hd;
        std::vector<gf_elem> check = synd;
        for (int idx : errata) {
            gf_elem xinv = inv_beta_[idx];
            gf_elem om = 0;
            for (int j = twot - 1; j >= 0; --j)
                om = FieldContext::add(gf.mul(om, xinv), omega[j]);
            // Lambda'(x) over GF(2^eta): odd-degree terms only
            gf_elem lp = 0;
            for (int d = 1; d <= deg_lambda; d += 2)
                lp = FieldContext::add(lp, gf.mul(lambda[d], gf.pow(xinv, d - 1)));
            if (lp == 0) return out;
            gf_elem y = gf.div(gf.mul(beta_[idx], om), lp);
            gf_elem ev = gf.div(y, w_[idx]);
            corrected[idx] = FieldContext::add(corrected[idx], ev);
            syndrome_add(check, idx, ev);
        }
        for (gf_elem v : check)
            if (v != 0) return out;

        out.status = DecodeOutcome::Status::Codeword;
        out.codeword = std::move(corrected);
        return out;
    }

private:
    int n_, k_;
    std::shared_ptr<const FieldContext> field_;
    std::vector<gf_elem> beta_;
    std::vector<gf_elem> w_;
    std::vector<gf_elem> inv_beta_;
    std::vector<std::uint32_t> synd_exp_;
};

}  // namespace rsrd

#endif

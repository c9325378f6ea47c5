#ifndef RSRD_GF_HPP
#define RSRD_GF_HPP

#include <cstdint>
#include <vector>

#include "rsrd/util.hpp"

namespace rsrd {

using gf_elem = std::uint16_t;

// Arithmetic over GF(2^eta) via exp/log tables built from a primitive
// polynomial. Addition is XOR of representations.
class FieldContext {
public:
    // Fixed primitive polynomials per bit width, so runs are reproducible.
    static std::uint32_t default_prim_poly(int eta) {
        switch (eta) {
            case 2:  return 0x7;
            case 3:  return 0xB;
            case 4:  return 0x13;
            case 5:  return 0x25;
            case 6:  return 0x43;
            case 7:  return 0x89;
            case 8:  return 0x11D;
            case 9:  return 0x211;
            case 10: return 0x409;
            case 11: return 0x805;
            case 12: return 0x1053;
            case 13: return 0x201B;
            case 14: return 0x4443;
            case 15: return 0x8003;
            case 16: return 0x1100B;
            default: throw UsageError("field bit width must be in 2..16");
        }
    }

    explicit FieldContext(int eta, std::uint32_t prim_poly = 0)
        : eta_(eta), prim_poly_(prim_poly ? prim_poly : default_prim_poly(eta)) {
        if (eta < 2 || eta > 16) throw UsageError("field bit width must be in 2..16");
        const std::uint32_t size = 1u << eta_;
        order_ = size - 1;
        log_.assign(size, 0);
        antilog_.assign(order_, 0);
        std::uint32_t x = 1;
        for (std::uint32_t i = 0; i < order_; ++i) {
            if (i > 0 && x == 1) throw UsageError("polynomial is not primitive");
            antilog_[i] = static_cast<gf_elem>(x);
            log_[x] = i;
            x <<= 1;
            if (x & size) x ^= prim_poly_;
        }
        if (x != 1) throw UsageError("polynomial is not primitive");
    }

    int eta() const { return eta_; }
    std::uint32_t prim_poly() const { return prim_poly_; }
    std::uint32_t order() const { return order_; }      // multiplicative order 2^eta - 1
    std::uint32_t size() const { return order_ + 1; }   // field size m = 2^eta

    static gf_elem add(gf_elem a, gf_elem b) { return a ^ b; }

    gf_elem mul(gf_elem a, gf_elem b) const {
        if (a == 0 || b == 0) return 0;
        return antilog_[mod_order(log_[a] + log_[b])];
    }

    gf_elem inv(gf_elem a) const {
        if (a == 0) throw DomainError("inverse of zero");
        return antilog_[mod_order(order_ - log_[a])];
    }

    gf_elem div(gf_elem a, gf_elem b) const { return mul(a, inv(b)); }

    gf_elem pow(gf_elem a, std::int64_t e) const {
        if (a == 0) {
            if (e < 0) throw DomainError("inverse of zero");
            return e == 0 ? gf_elem(1) : gf_elem(0);
        }
        std::int64_t k = (static_cast<std::int64_t>(log_[a]) * e) % order_;
        if (k < 0) k += order_;
        return antilog_[static_cast<std::uint32_t>(k)];
    }

    gf_elem alpha_pow(std::int64_t e) const {
        std::int64_t k = e % order_;
        if (k < 0) k += order_;
        return antilog_[static_cast<std::uint32_t>(k)];
    }

    std::uint32_t log(gf_elem a) const {
        if (a == 0) throw DomainError("log of zero");
        return log_[a];
    }
    gf_elem antilog(std::uint32_t k) const { return antilog_[mod_order(k)]; }

private:
    std::uint32_t mod_order(std::uint32_t k) const { return k >= order_ ? k - order_ : k; }

    int eta_;
    std::uint32_t prim_poly_;
    std::uint32_t order_;
    std::vector<std::uint32_t> log_;
    std::vector<gf_elem> antilog_;
};

}  // namespace rsrd

#endif

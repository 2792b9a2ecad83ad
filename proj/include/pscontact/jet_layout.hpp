#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pscontact {

inline constexpr int kMaxJetOrder = 3;
inline constexpr int kMaxJetVars = 16;

// Dense enumeration of the multi-indices alpha with |alpha| <= order over
// num_vars variables, graded by total degree. Entries of degree <= k form a
// prefix of the table, so truncating a jet to a lower order is a prefix copy.
//
// Layouts are interned and immutable; Jet instances hold a pointer into the
// intern table, which stays valid for the lifetime of the process.
class JetLayout {
public:
    static const JetLayout& get(int num_vars, int order);

    int num_vars() const { return num_vars_; }
    int order() const { return order_; }
    int size() const { return size_; }

    std::span<const std::uint8_t> exponents(int idx) const {
        return {exps_.data() + static_cast<std::size_t>(idx) * num_vars_,
                static_cast<std::size_t>(num_vars_)};
    }
    int degree(int idx) const { return degree_[idx]; }

    // Index of the exponent vector in this table, -1 when |alpha| > order.
    int index_of(std::span<const std::uint8_t> exps) const;

    // Index of alpha + e_var, -1 when the shifted degree exceeds the order.
    int shifted_index(int idx, int var) const {
        return shift_[static_cast<std::size_t>(idx) * num_vars_ + var];
    }

    // Rows of the Leibniz convolution out[d] = sum coeff*a[left]*b[right],
    // grouped per destination index: rows seg_begin[d] .. seg_begin[d+1)-1.
    struct LeibnizTable {
        std::vector<std::int32_t> seg_begin;
        std::vector<std::int32_t> left;
        std::vector<std::int32_t> right;
        std::vector<double> coeff;
    };
    const LeibnizTable& leibniz() const { return leibniz_; }

    JetLayout(const JetLayout&) = delete;
    JetLayout& operator=(const JetLayout&) = delete;

private:
    JetLayout(int num_vars, int order);

    std::uint32_t encode(std::span<const std::uint8_t> exps) const;

    int num_vars_;
    int order_;
    int size_;
    std::vector<std::uint8_t> exps_;       // size_ * num_vars_
    std::vector<std::uint8_t> degree_;
    std::vector<std::int32_t> shift_;      // size_ * num_vars_
    std::vector<std::pair<std::uint32_t, std::int32_t>> code_index_; // sorted by code
    LeibnizTable leibniz_;
};

} // namespace pscontact

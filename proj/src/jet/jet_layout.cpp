#include "pscontact/jet_layout.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include "pscontact/errors.hpp"

namespace pscontact {

namespace {

// C(n, k) for n, k <= kMaxJetOrder.
double small_binomial(int n, int k) {
    static constexpr double table[4][4] = {
        {1, 0, 0, 0},
        {1, 1, 0, 0},
        {1, 2, 1, 0},
        {1, 3, 3, 1},
    };
    return table[n][k];
}

void generate_graded(int num_vars, int order, std::vector<std::uint8_t>& out) {
    std::vector<std::uint8_t> cur(static_cast<std::size_t>(num_vars), 0);
    // Within a degree, the first variable's exponent descends; deterministic.
    auto rec = [&](auto&& self, int var, int remaining) -> void {
        if (var == num_vars - 1) {
            cur[var] = static_cast<std::uint8_t>(remaining);
            out.insert(out.end(), cur.begin(), cur.end());
            return;
        }
        for (int e = remaining; e >= 0; --e) {
            cur[var] = static_cast<std::uint8_t>(e);
            self(self, var + 1, remaining - e);
        }
    };
    for (int deg = 0; deg <= order; ++deg) {
        rec(rec, 0, deg);
    }
}

} // namespace

std::uint32_t JetLayout::encode(std::span<const std::uint8_t> exps) const {
    std::uint32_t code = 0;
    for (int v = 0; v < num_vars_; ++v) {
        code |= static_cast<std::uint32_t>(exps[v] & 0x3u) << (2 * v);
    }
    return code;
}

JetLayout::JetLayout(int num_vars, int order) : num_vars_(num_vars), order_(order) {
    generate_graded(num_vars, order, exps_);
    size_ = static_cast<int>(exps_.size()) / num_vars_;

    degree_.resize(size_);
    code_index_.reserve(size_);
    for (int i = 0; i < size_; ++i) {
        auto e = exponents(i);
        int deg = 0;
        for (auto x : e) deg += x;
        degree_[i] = static_cast<std::uint8_t>(deg);
        code_index_.emplace_back(encode(e), i);
    }
    std::sort(code_index_.begin(), code_index_.end());

    shift_.assign(static_cast<std::size_t>(size_) * num_vars_, -1);
    std::vector<std::uint8_t> tmp(static_cast<std::size_t>(num_vars_));
    for (int i = 0; i < size_; ++i) {
        auto e = exponents(i);
        for (int v = 0; v < num_vars_; ++v) {
            if (degree_[i] + 1 > order_) continue;
            std::copy(e.begin(), e.end(), tmp.begin());
            tmp[v] += 1;
            shift_[static_cast<std::size_t>(i) * num_vars_ + v] = index_of(tmp);
        }
    }

    // Leibniz rows: for destination alpha, every beta <= alpha contributes
    // C(alpha, beta) * a[beta] * b[alpha - beta].
    leibniz_.seg_begin.push_back(0);
    std::vector<std::uint8_t> beta(static_cast<std::size_t>(num_vars_));
    std::vector<std::uint8_t> rest(static_cast<std::size_t>(num_vars_));
    for (int d = 0; d < size_; ++d) {
        auto alpha = exponents(d);
        std::fill(beta.begin(), beta.end(), 0);
        bool done = false;
        while (!done) {
            double coeff = 1.0;
            for (int v = 0; v < num_vars_; ++v) {
                rest[v] = static_cast<std::uint8_t>(alpha[v] - beta[v]);
                coeff *= small_binomial(alpha[v], beta[v]);
            }
            leibniz_.left.push_back(index_of(beta));
            leibniz_.right.push_back(index_of(rest));
            leibniz_.coeff.push_back(coeff);
            // Mixed-radix increment of beta with per-digit bound alpha[v].
            done = true;
            for (int v = 0; v < num_vars_; ++v) {
                if (beta[v] < alpha[v]) {
                    beta[v] += 1;
                    std::fill(beta.begin(), beta.begin() + v, 0);
                    done = false;
                    break;
                }
            }
        }
        leibniz_.seg_begin.push_back(static_cast<std::int32_t>(leibniz_.left.size()));
    }
}

int JetLayout::index_of(std::span<const std::uint8_t> exps) const {
    int deg = 0;
    for (auto x : exps) deg += x;
    if (deg > order_) return -1;
    std::uint32_t code = encode(exps);
    auto it = std::lower_bound(code_index_.begin(), code_index_.end(),
                               std::make_pair(code, std::int32_t{0}));
    return (it != code_index_.end() && it->first == code) ? it->second : -1;
}

const JetLayout& JetLayout::get(int num_vars, int order) {
    if (num_vars < 1 || num_vars > kMaxJetVars) {
        throw JetError("jet: variable count out of range");
    }
    if (order < 0 || order > kMaxJetOrder) {
        throw JetError("jet: order out of range");
    }
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(num_vars, order);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, std::unique_ptr<JetLayout>(new JetLayout(num_vars, order))).first;
    }
    return *it->second;
}

} // namespace pscontact

#include <algorithm>
#include <cmath>
#include <random>

#include "pscontact/errors.hpp"
#include "pscontact/geometry.hpp"

namespace pscontact {

namespace {

constexpr double kPivotThreshold = 1e-6;
constexpr int kMaxSeedAttempts = 20;

double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace

// Pseudo-Gram-Schmidt on Ker eta, pairing each accepted e_i with phi e_i.
// Candidates are the eta-projected coordinate probes; when every remaining
// candidate is nearly null the construction re-seeds with randomized
// combinations (fixed seed, bounded attempts).
PhiBasis build_phi_basis(const PointContext& ctx) {
    const int d = ctx.dim();
    const int n = ctx.n();
    const Eigen::MatrixXd& g = ctx.g();
    const Eigen::MatrixXd& phi = ctx.phi();
    const Eigen::VectorXd& xi = ctx.xi();
    const Eigen::VectorXd& eta = ctx.eta();

    auto pair = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a.dot(g * b); };
    auto project_H = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return v - eta.dot(v) * xi;
    };

    std::mt19937_64 rng(0x5EEDF0A3ULL);
    for (int attempt = 0; attempt < kMaxSeedAttempts; ++attempt) {
        std::vector<Eigen::VectorXd> candidates;
        for (int a = 0; a < d; ++a) {
            Eigen::VectorXd v = project_H(Eigen::VectorXd::Unit(d, a));
            if (v.cwiseAbs().maxCoeff() > 1e-12) candidates.push_back(std::move(v));
        }
        if (attempt > 0) {
            for (int extra = 0; extra < d; ++extra) {
                Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
                for (int a = 0; a < d; ++a) v[a] = 2.0 * unit_double(rng) - 1.0;
                candidates.push_back(project_H(v));
            }
        }

        std::vector<Eigen::VectorXd> accepted; // e_1, phi e_1, e_2, phi e_2, ...
        std::vector<double> accepted_sign;
        bool failed = false;
        for (int step = 0; step < n; ++step) {
            int best = -1;
            double best_norm = kPivotThreshold;
            std::vector<Eigen::VectorXd> reduced(candidates.size());
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                Eigen::VectorXd v = candidates[c];
                for (std::size_t aidx = 0; aidx < accepted.size(); ++aidx) {
                    v -= accepted_sign[aidx] * pair(v, accepted[aidx]) * accepted[aidx];
                }
                reduced[c] = v;
                double nrm = std::abs(pair(v, v));
                if (nrm > best_norm) {
                    best_norm = nrm;
                    best = static_cast<int>(c);
                }
            }
            if (best < 0) {
                failed = true;
                break;
            }
            Eigen::VectorXd e = reduced[best] / std::sqrt(std::abs(pair(reduced[best], reduced[best])));
            Eigen::VectorXd fe = phi * e;
            accepted.push_back(e);
            accepted_sign.push_back(pair(e, e) >= 0 ? 1.0 : -1.0);
            accepted.push_back(fe);
            accepted_sign.push_back(pair(fe, fe) >= 0 ? 1.0 : -1.0);
        }
        if (failed) continue;

        PhiBasis basis;
        basis.n = n;
        basis.vectors = Eigen::MatrixXd(d, d);
        basis.signs.resize(d);
        for (int i = 0; i < n; ++i) {
            basis.vectors.col(i) = accepted[2 * i];
            basis.vectors.col(n + i) = accepted[2 * i + 1];
        }
        basis.vectors.col(2 * n) = xi;
        for (int a = 0; a < d; ++a) {
            double sq = pair(basis.vectors.col(a), basis.vectors.col(a));
            basis.signs[a] = sq >= 0 ? 1 : -1;
            if (std::abs(std::abs(sq) - 1.0) > 1e-7) {
                failed = true;
            }
        }
        for (int a = 0; a < d && !failed; ++a) {
            for (int b = a + 1; b < d; ++b) {
                if (std::abs(pair(basis.vectors.col(a), basis.vectors.col(b))) > 1e-7) {
                    failed = true;
                    break;
                }
            }
        }
        if (!failed) return basis;
    }
    throw FrameConstructionError("phi-basis construction failed: all candidate pivots near null");
}

// Deterministic rank-2n selection among the projected coordinate probes:
// symmetric elimination on the g-Gram matrix with greedy pivoting; the probe
// never chosen as a pivot is dropped.
HBasis build_h_basis(const PointContext& ctx) {
    const int d = ctx.dim();
    const int rank = d - 1;
    const Eigen::MatrixXd& g = ctx.g();
    const Eigen::VectorXd& xi = ctx.xi();
    const Eigen::VectorXd& eta = ctx.eta();

    Eigen::MatrixXd P(d, d);
    for (int a = 0; a < d; ++a) {
        P.col(a) = Eigen::VectorXd::Unit(d, a) - eta[a] * xi;
    }
    Eigen::MatrixXd gram = P.transpose() * g * P;
    const double scale = std::max(1.0, gram.cwiseAbs().maxCoeff());

    std::vector<bool> used(static_cast<std::size_t>(d), false);
    std::vector<int> kept;
    Eigen::MatrixXd work = gram;
    bool gram_ok = true;
    for (int step = 0; step < rank && gram_ok; ++step) {
        int best = -1;
        double best_abs = 1e-10 * scale;
        for (int a = 0; a < d; ++a) {
            if (!used[a] && std::abs(work(a, a)) > best_abs) {
                best_abs = std::abs(work(a, a));
                best = a;
            }
        }
        if (best < 0) {
            gram_ok = false;
            break;
        }
        used[best] = true;
        kept.push_back(best);
        const double piv = work(best, best);
        for (int a = 0; a < d; ++a) {
            if (used[a]) continue;
            for (int b = 0; b < d; ++b) {
                if (used[b]) continue;
                work(a, b) -= work(a, best) * work(best, b) / piv;
            }
        }
    }
    if (!gram_ok) {
        // Fully isotropic projected probes leave no usable g-Gram diagonal
        // pivot even though Ker eta is nondegenerate; fall back to a
        // rank-revealing Euclidean selection, which only needs independence.
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(P);
        if (qr.rank() < rank) {
            throw FrameConstructionError("H-basis construction failed: projected probes are rank deficient");
        }
        kept.clear();
        for (int i = 0; i < rank; ++i) {
            kept.push_back(static_cast<int>(qr.colsPermutation().indices()[i]));
        }
        used.assign(static_cast<std::size_t>(d), false);
        for (int a : kept) used[a] = true;
    }
    std::sort(kept.begin(), kept.end());

    HBasis basis;
    basis.kept = kept;
    basis.vectors = Eigen::MatrixXd(d, rank);
    for (int i = 0; i < rank; ++i) basis.vectors.col(i) = P.col(kept[i]);
    for (int a = 0; a < d; ++a) {
        if (!used[a]) basis.dropped = a;
    }
    return basis;
}

} // namespace pscontact

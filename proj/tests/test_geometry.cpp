#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "pscontact/errors.hpp"
#include "pscontact/geometry.hpp"
#include "test_support.hpp"

using namespace pscontact;

namespace {

TensorFieldSpec make_field(int rank_up, int rank_down, const std::vector<std::string>& comps,
                           const std::vector<std::string>& coords) {
    const int dim = static_cast<int>(coords.size());
    TensorFieldSpec t = TensorFieldSpec::make(rank_up, rank_down, dim);
    for (std::size_t i = 0; i < comps.size(); ++i) {
        t.components[i] = parse_expression(comps[i], coords);
    }
    return t;
}

// Independent Koszul-formula oracle: metric derivatives by central
// differences of the component expressions, inverse by dense linear algebra.
Ten3 christoffel_fd(const TensorFieldSpec& metric, const std::vector<double>& x, double h) {
    const int d = metric.dim;
    auto g_at = [&](const std::vector<double>& p) {
        Eigen::MatrixXd g(d, d);
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) g(i, j) = eval_value(*metric.at(i, j), p);
        }
        return g;
    };
    std::vector<Eigen::MatrixXd> dg(d);
    for (int a = 0; a < d; ++a) {
        auto xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        dg[a] = (g_at(xp) - g_at(xm)) / (2.0 * h);
    }
    Eigen::MatrixXd ginv = g_at(x).inverse();
    Ten3 gamma(d);
    for (int k = 0; k < d; ++k) {
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                double acc = 0.0;
                for (int l = 0; l < d; ++l) {
                    acc += 0.5 * ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
                }
                gamma(k, i, j) = acc;
            }
        }
    }
    return gamma;
}

JetVec eval_field(const std::vector<std::string>& comps, const std::vector<std::string>& coords,
                  const std::vector<double>& x, int order) {
    JetVec out;
    for (const auto& c : comps) {
        out.push_back(eval_jet(*parse_expression(c, coords), x, order));
    }
    return out;
}

} // namespace

TEST_CASE("constant metrics have vanishing Christoffel symbols and curvature") {
    const std::vector<std::string> coords = {"x", "y", "z"};
    for (const char* g11 : {"1", "-1"}) {
        TensorFieldSpec g = make_field(0, 2,
            {g11, "0", "0",
             "0", "1", "0",
             "0", "0", "1"}, coords);
        ConnectionJets c = compute_connection(g, std::vector<double>{0.3, -0.7, 1.1}, 3);
        for (const Jet& j : c.gamma) CHECK(j.max_abs() == 0.0);
        for (const Jet& j : c.riemann) CHECK(j.max_abs() < 1e-12);
    }
}

TEST_CASE("polar-style 2D metric: exact Christoffel values") {
    const std::vector<std::string> coords = {"x1", "x2"};
    TensorFieldSpec g = make_field(0, 2, {"1", "0", "0", "x1^2"}, coords);
    const std::vector<double> x = {0.8, 0.4};
    ConnectionJets c = compute_connection(g, x, 3);

    CHECK(c.gamma_at(0, 1, 1).value() == doctest::Approx(-0.8).epsilon(1e-12));
    CHECK(c.gamma_at(1, 0, 1).value() == doctest::Approx(1.0 / 0.8).epsilon(1e-12));
    CHECK(c.gamma_at(1, 1, 0).value() == doctest::Approx(1.0 / 0.8).epsilon(1e-12));
    CHECK(c.gamma_at(0, 0, 0).value() == doctest::Approx(0.0));

    // Koszul brute-force cross-check of every component.
    Ten3 fd = christoffel_fd(g, x, 1e-5);
    for (int k = 0; k < 2; ++k) {
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                CHECK(c.gamma_at(k, i, j).value() == doctest::Approx(fd(k, i, j)).epsilon(1e-7));
            }
        }
    }
}

TEST_CASE("round 2-sphere block: sectional curvature one") {
    const std::vector<std::string> coords2 = {"x1", "x2"};
    TensorFieldSpec g2 = make_field(0, 2, {"1", "0", "0", "sin(x1)^2"}, coords2);
    const std::vector<double> p2 = {1.1, 0.4};
    ConnectionJets c2 = compute_connection(g2, p2, 3);
    double g00 = c2.g.at(0, 0).value();
    double g11 = c2.g.at(1, 1).value();
    // K = g(R(d0,d1)d1, d0) / (g00 g11 - g01^2); lowered via g.
    double r_low = 0.0;
    for (int m = 0; m < 2; ++m) {
        r_low += c2.g.at(0, m).value() * c2.riemann_at(m, 1, 0, 1).value();
    }
    CHECK(r_low / (g00 * g11) == doctest::Approx(1.0).epsilon(1e-10));

    // Same block inside a 3D product chart.
    const std::vector<std::string> coords3 = {"x1", "x2", "x3"};
    TensorFieldSpec g3 = make_field(0, 2,
        {"1", "0", "0", "0", "sin(x1)^2", "0", "0", "0", "1"}, coords3);
    ConnectionJets c3 = compute_connection(g3, std::vector<double>{1.1, 0.4, -0.2}, 3);
    double r3 = 0.0;
    for (int m = 0; m < 3; ++m) {
        r3 += c3.g.at(0, m).value() * c3.riemann_at(m, 1, 0, 1).value();
    }
    CHECK(r3 / (c3.g.at(0, 0).value() * c3.g.at(1, 1).value()) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("curvature components agree with a finite-difference route") {
    // d Gamma by central differences of the Koszul oracle, then the same
    // quadratic assembly; checks the jet route end to end.
    const std::vector<std::string> coords = {"x1", "x2", "x3"};
    TensorFieldSpec g = make_field(0, 2,
        {"1 + 0.2*sin(x2)", "0.1*x3", "0",
         "0.1*x3", "1 + 0.1*x1^2", "0.05*x2",
         "0", "0.05*x2", "0.9 + 0.1*cos(x1)"}, coords);
    const std::vector<double> x = {0.3, -0.5, 0.7};
    ConnectionJets c = compute_connection(g, x, 3);

    const int d = 3;
    const double h = 1e-5;
    std::vector<Ten3> dgamma(d);
    for (int a = 0; a < d; ++a) {
        auto xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        Ten3 gp = christoffel_fd(g, xp, 1e-5);
        Ten3 gm = christoffel_fd(g, xm, 1e-5);
        dgamma[a] = Ten3(d);
        for (std::size_t q = 0; q < gp.v.size(); ++q) dgamma[a].v[q] = (gp.v[q] - gm.v[q]) / (2 * h);
    }
    Ten3 gamma0 = christoffel_fd(g, x, 1e-6);
    for (int l = 0; l < d; ++l) {
        for (int k = 0; k < d; ++k) {
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    double acc = dgamma[i](l, j, k) - dgamma[j](l, i, k);
                    for (int m = 0; m < d; ++m) {
                        acc += gamma0(l, i, m) * gamma0(m, j, k) - gamma0(l, j, m) * gamma0(m, i, k);
                    }
                    double jet_val = c.riemann_at(l, k, i, j).value();
                    CHECK(std::abs(jet_val - acc) / std::max(1.0, std::abs(acc)) < 1e-5);
                }
            }
        }
    }

    // Gamma itself against the oracle.
    Ten3 fd = christoffel_fd(g, x, 1e-5);
    for (int k = 0; k < d; ++k) {
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                CHECK(std::abs(c.gamma_at(k, i, j).value() - fd(k, i, j)) /
                          std::max(1.0, std::abs(fd(k, i, j))) < 1e-7);
            }
        }
    }
}

TEST_CASE("metric_at: signatures, inverse, failure modes") {
    const std::vector<std::string> coords = {"x", "y", "z"};
    TensorFieldSpec mink = make_field(0, 2,
        {"-1", "0", "0", "0", "1", "0", "0", "0", "1"}, coords);
    MetricAtPoint m = metric_at(mink, std::vector<double>{0, 0, 0});
    CHECK(m.positive == 2);
    CHECK(m.negative == 1);
    CHECK((m.inverse - m.components).cwiseAbs().maxCoeff() < 1e-14);

    TensorFieldSpec eucl = make_field(0, 2,
        {"1", "0", "0", "0", "1", "0", "0", "0", "1"}, coords);
    MetricAtPoint e = metric_at(eucl, std::vector<double>{0, 0, 0});
    CHECK(e.positive == 3);
    CHECK(e.negative == 0);

    TensorFieldSpec degen = make_field(0, 2,
        {"1", "0", "0", "0", "0", "0", "0", "0", "1"}, coords);
    CHECK_THROWS_AS(metric_at(degen, std::vector<double>{0, 0, 0}), DegenerateMetricError);

    TensorFieldSpec asym = make_field(0, 2,
        {"1", "0.5", "0", "0", "1", "0", "0", "0", "1"}, coords);
    CHECK_THROWS_AS(metric_at(asym, std::vector<double>{0, 0, 0}), AsymmetricMetricError);
}

TEST_CASE("lie brackets: coordinate fields, hand case, antisymmetry, Jacobi") {
    const std::vector<std::string> coords = {"x", "y", "z"};
    const std::vector<double> at = {0.4, -0.3, 0.9};

    JetVec dx = eval_field({"1", "0", "0"}, coords, at, 2);
    JetVec dy = eval_field({"0", "1", "0"}, coords, at, 2);
    JetVec zero = jet_bracket(dx, dy);
    CHECK(jet_values(zero).cwiseAbs().maxCoeff() == 0.0);

    // X = x d_y, Y = d_x  ->  [X, Y] = -d_y
    JetVec X = eval_field({"0", "x", "0"}, coords, at, 2);
    JetVec Y = eval_field({"1", "0", "0"}, coords, at, 2);
    Eigen::VectorXd br = jet_values(jet_bracket(X, Y));
    CHECK(br[0] == 0.0);
    CHECK(br[1] == -1.0);
    CHECK(br[2] == 0.0);

    std::mt19937_64 rng(505);
    auto random_poly_field = [&]() {
        auto coef = [&]() {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.3f", psctest::uniform_in(rng, -1.0, 1.0));
            return std::string(buf);
        };
        std::vector<std::string> comps;
        for (int k = 0; k < 3; ++k) {
            comps.push_back(coef() + " + " + coef() + "*x + " + coef() + "*y*z + " + coef() +
                            "*y^2");
        }
        return comps;
    };
    for (int rep = 0; rep < 50; ++rep) {
        JetVec A = eval_field(random_poly_field(), coords, at, 2);
        JetVec B = eval_field(random_poly_field(), coords, at, 2);
        JetVec C = eval_field(random_poly_field(), coords, at, 2);

        JetVec ab = jet_bracket(A, B);
        JetVec ba = jet_bracket(B, A);
        Eigen::VectorXd anti = jet_values(ab) + jet_values(ba);
        CHECK(anti.cwiseAbs().maxCoeff() < 1e-10);

        // Jacobi: [A,[B,C]] + [B,[C,A]] + [C,[A,B]] = 0
        Eigen::VectorXd jac = jet_values(jet_bracket(A, jet_bracket(B, C))) +
                              jet_values(jet_bracket(B, jet_bracket(C, A))) +
                              jet_values(jet_bracket(C, jet_bracket(A, B)));
        CHECK(jac.cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("jet matrix inverse: A * inv(A) = I in the jet ring") {
    const std::vector<std::string> coords = {"x", "y", "z"};
    TensorFieldSpec g = make_field(0, 2,
        {"2 + sin(x)", "0.3*y", "0",
         "0.3*y", "1.5", "0.2*z",
         "0", "0.2*z", "1 + 0.1*x^2"}, coords);
    JetMat A = eval_matrix_jets(g, std::vector<double>{0.2, 0.4, -0.6}, 2);
    JetMat inv = jet_matrix_inverse(A);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            Jet acc = Jet::zeros(3, 2);
            for (int k = 0; k < 3; ++k) acc += A.at(i, k) * inv.at(k, j);
            if (i == j) acc -= 1.0;
            CHECK(acc.max_abs() < 1e-12);
        }
    }
}

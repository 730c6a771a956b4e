#include "aakmin/wfa.hpp"

#include <cmath>

#include "aakmin/linalg.hpp"

namespace aakmin {

void validate(const Wfa& w)
{
    const auto n = w.trans.rows();
    if (n < 1)
        fail(Stage::Core, "automaton must have at least one state");
    if (w.trans.cols() != n)
        fail(Stage::Core, "transition matrix is not square: " +
                              std::to_string(w.trans.rows()) + "x" +
                              std::to_string(w.trans.cols()));
    if (w.alpha.size() != n || w.beta.size() != n)
        fail(Stage::Core,
             "weight vectors do not match the state count: alpha has " +
                 std::to_string(w.alpha.size()) + ", beta has " +
                 std::to_string(w.beta.size()) + ", expected " +
                 std::to_string(n));
    if (!w.alpha.allFinite() || !w.beta.allFinite() || !w.trans.allFinite())
        fail(Stage::Core, "automaton contains non-finite entries");
}

double evaluate(const Wfa& w, long t)
{
    if (t < 0)
        fail(Stage::Core, "evaluate: negative index " + std::to_string(t));
    VectorXd v = w.beta;
    for (long i = 0; i < t; ++i)
        v = w.trans * v;
    return w.alpha.dot(v);
}

std::vector<double> evaluate_prefix(const Wfa& w, long count)
{
    std::vector<double> out;
    out.reserve(static_cast<size_t>(count > 0 ? count : 0));
    VectorXd v = w.beta;
    for (long t = 0; t < count; ++t) {
        out.push_back(w.alpha.dot(v));
        if (t + 1 < count)
            v = w.trans * v;
    }
    return out;
}

double spectral_radius(const MatrixXd& a)
{
    if (a.rows() == 0)
        return 0.0;
    Eigen::EigenSolver<MatrixXd> es(a, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double spectral_radius(const Wfa& w)
{
    return spectral_radius(w.trans);
}

bool is_irredundant(const Wfa& w, double margin)
{
    return spectral_radius(w.trans) < 1.0 - margin;
}

DifferenceWfa difference(const Wfa& a, const Wfa& b)
{
    validate(a);
    validate(b);
    const int n = a.states(), m = b.states();
    DifferenceWfa d;
    d.left_states = n;
    d.right_states = m;
    d.combined.alpha.resize(n + m);
    d.combined.alpha << a.alpha, -b.alpha;
    d.combined.beta.resize(n + m);
    d.combined.beta << a.beta, b.beta;
    d.combined.trans = MatrixXd::Zero(n + m, n + m);
    d.combined.trans.topLeftCorner(n, n) = a.trans;
    d.combined.trans.bottomRightCorner(m, m) = b.trans;
    return d;
}

namespace {

// Orthonormal basis of the numerical column space of k, with a warning when
// some singular value sits within a decade of the cut.
MatrixXd column_space(const MatrixXd& k, double tol, std::string* warning)
{
    SvdResult s = svd(k);
    const double top = s.s.size() > 0 ? s.s(0) : 0.0;
    if (top <= 0.0)
        return MatrixXd(k.rows(), 0);
    const double cut = tol * top;
    int rank = 0;
    for (int i = 0; i < s.s.size(); ++i) {
        if (s.s(i) > cut)
            ++rank;
        if (warning && s.s(i) > cut / 10 && s.s(i) < cut * 10) {
            *warning = "rank decision ambiguous: singular value " +
                       std::to_string(s.s(i)) + " within a decade of cutoff " +
                       std::to_string(cut);
        }
    }
    return s.u.leftCols(rank);
}

MatrixXd krylov(const MatrixXd& a, const VectorXd& v)
{
    const auto n = a.rows();
    MatrixXd k(n, n);
    VectorXd col = v;
    for (int j = 0; j < n; ++j) {
        k.col(j) = col;
        if (j + 1 < n)
            col = a * col;
    }
    return k;
}

Wfa one_state_zero()
{
    Wfa z;
    z.alpha = VectorXd::Zero(1);
    z.beta = VectorXd::Zero(1);
    z.trans = MatrixXd::Zero(1, 1);
    return z;
}

} // namespace

MinimizeResult minimize_with_diagnostics(const Wfa& w, double tol)
{
    validate(w);
    if (!(tol > 0.0) || !(tol < 1.0))
        fail(Stage::Core, "minimize: tolerance must lie in (0, 1), got " +
                              std::to_string(tol));

    MinimizeResult res;

    // forward pass: restrict to the space swept out by beta
    MatrixXd v1 = column_space(krylov(w.trans, w.beta), tol, &res.warning);
    if (v1.cols() == 0) {
        res.wfa = one_state_zero();
        return res;
    }
    Wfa r1;
    r1.trans = v1.transpose() * w.trans * v1;
    r1.alpha = v1.transpose() * w.alpha;
    r1.beta = v1.transpose() * w.beta;

    // backward pass: restrict to the space swept out by alpha
    MatrixXd v2 =
        column_space(krylov(r1.trans.transpose(), r1.alpha), tol, &res.warning);
    if (v2.cols() == 0) {
        res.wfa = one_state_zero();
        return res;
    }
    res.wfa.trans = v2.transpose() * r1.trans * v2;
    res.wfa.alpha = v2.transpose() * r1.alpha;
    res.wfa.beta = v2.transpose() * r1.beta;
    return res;
}

Wfa minimize(const Wfa& w, double tol)
{
    return minimize_with_diagnostics(w, tol).wfa;
}

} // namespace aakmin

#include "veecav/lindblad.hpp"
#include "veecav/errors.hpp"
#include "veecav/rk45.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace veecav {

using Cx = std::complex<double>;
using SpMat = Eigen::SparseMatrix<Cx>;
using Triplet = Eigen::Triplet<Cx>;

namespace {

constexpr Cx I{0.0, 1.0};

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B) {
    Eigen::MatrixXcd out(A.rows() * B.rows(), A.cols() * B.cols());
    for (Eigen::Index i = 0; i < A.rows(); ++i)
        for (Eigen::Index j = 0; j < A.cols(); ++j)
            out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    return out;
}

Eigen::MatrixXcd fock_destroy(int levels) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(levels, levels);
    for (int n = 1; n < levels; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

Eigen::MatrixXcd qubit_lower() {
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(2, 2);
    s(0, 1) = 1.0;
    return s;
}

void check_hermitian(const Eigen::MatrixXcd& H) {
    const double scale = std::max(H.cwiseAbs().maxCoeff(), 1e-300);
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw NumericalError("Hamiltonian is not Hermitian");
}

} // namespace

const Eigen::MatrixXcd& LindbladModel::label(const std::string& name) const {
    auto it = labels.find(name);
    if (it == labels.end()) throw RangeError("label", "unknown observable '" + name + "'");
    return it->second;
}

namespace {

// Registers an observable together with its adjoint under "<name>_dag".
void add_label(LindbladModel& m, const std::string& name, const Eigen::MatrixXcd& op) {
    m.labels[name] = op;
    m.labels[name + "_dag"] = op.adjoint();
}

} // namespace

LindbladModel three_level_cavity_model(const SystemParams& p, int cutoff) {
    if (cutoff < 2) throw RangeError("cutoff", "Fock cutoff must be >= 2");
    validate_ranges(p);

    const int levels = cutoff + 1;
    const Eigen::MatrixXcd If = Eigen::MatrixXcd::Identity(levels, levels);
    const Eigen::MatrixXcd I2 = Eigen::MatrixXcd::Identity(2, 2);
    const Eigen::MatrixXcd s = qubit_lower();

    LindbladModel m;
    m.dim = levels * 4;
    m.fock_cutoff = cutoff;

    const Eigen::MatrixXcd a = kron(fock_destroy(levels), kron(I2, I2));
    const Eigen::MatrixXcd s1 = kron(If, kron(s, I2));
    const Eigen::MatrixXcd s2 = kron(If, kron(I2, s));

    m.H = p.delta_1 * (s1.adjoint() * s1) + p.delta_2 * (s2.adjoint() * s2) +
          p.g_1 * (a.adjoint() * s1 + a * s1.adjoint()) +
          p.g_2 * (a.adjoint() * s2 + a * s2.adjoint());
    check_hermitian(m.H);

    if (p.gamma_a > 0) m.jumps.push_back({p.gamma_a, a});
    if (p.P_a > 0) m.jumps.push_back({p.P_a, a.adjoint()});

    // Exciton decay including the aligned-dipole cross terms: diagonalize
    // the rate matrix [[g1, g12], [g12, g2]] into two independent jumps.
    const DerivedRates r = derived_rates(p);
    if (p.gamma_1 > 0 || p.gamma_2 > 0) {
        const double mean = 0.5 * (p.gamma_1 + p.gamma_2);
        const double halfdiff = 0.5 * (p.gamma_1 - p.gamma_2);
        const double split = std::hypot(halfdiff, r.gamma_12);
        const double rp = mean + split, rm = mean - split;
        if (rm < -1e-12) {
            std::ostringstream os;
            os << "NonPositiveDissipatorError: exciton rate matrix eigenvalue " << rm;
            throw NonPositiveDissipatorError(os.str());
        }
        const double phi = 0.5 * std::atan2(2.0 * r.gamma_12, p.gamma_1 - p.gamma_2);
        const double cp = std::cos(phi), sp = std::sin(phi);
        if (rp > 1e-15) m.jumps.push_back({rp, cp * s1 + sp * s2});
        if (rm > 1e-15) m.jumps.push_back({rm, -sp * s1 + cp * s2});
    }
    if (p.P_1 > 0) m.jumps.push_back({p.P_1, s1.adjoint()});
    if (p.P_2 > 0) m.jumps.push_back({p.P_2, s2.adjoint()});

    add_label(m, "a", a);
    add_label(m, "sigma1", s1);
    add_label(m, "sigma2", s2);
    m.emission_label = "a";

    // [a, a+] = 1 except on the top Fock level (truncation artifact).
    Eigen::MatrixXcd comm = a * a.adjoint() - a.adjoint() * a - Eigen::MatrixXcd::Identity(m.dim, m.dim);
    double defect = 0.0;
    for (int i = 0; i < m.dim; ++i)
        for (int j = 0; j < m.dim; ++j)
            if (i / 4 != cutoff && j / 4 != cutoff) defect = std::max(defect, std::abs(comm(i, j)));
    m.truncation_defect = defect;
    return m;
}

LindbladModel driven_qubit_model(double rabi, double gamma, double detuning) {
    if (!(gamma > 0)) throw RangeError("gamma", "decay rate must be > 0");
    if (!std::isfinite(rabi) || !std::isfinite(detuning))
        throw RangeError("rabi/detuning", "must be finite");

    LindbladModel m;
    m.dim = 2;
    const Eigen::MatrixXcd s = qubit_lower();
    m.H = detuning * (s.adjoint() * s) + rabi * (s + s.adjoint());
    m.jumps.push_back({gamma, s});
    add_label(m, "sigma", s);
    m.emission_label = "sigma";
    return m;
}

LindbladModel pumped_cavity_model(double gamma_a, double P_a, int cutoff) {
    if (cutoff < 2) throw RangeError("cutoff", "Fock cutoff must be >= 2");
    if (gamma_a < 0 || P_a < 0) throw RangeError("gamma_a/P_a", "rates must be >= 0");

    LindbladModel m;
    const int levels = cutoff + 1;
    m.dim = levels;
    m.fock_cutoff = cutoff;
    const Eigen::MatrixXcd a = fock_destroy(levels);
    m.H = Eigen::MatrixXcd::Zero(levels, levels);
    if (gamma_a > 0) m.jumps.push_back({gamma_a, a});
    if (P_a > 0) m.jumps.push_back({P_a, a.adjoint()});
    add_label(m, "a", a);
    m.emission_label = "a";
    return m;
}

LindbladModel attach_sensors(const LindbladModel& m, const std::vector<SensorSpec>& sensors) {
    if (sensors.empty()) return m;
    for (size_t i = 0; i < sensors.size(); ++i) {
        if (!(sensors[i].Gamma > 0))
            throw RangeError("Gamma", "sensor " + std::to_string(i + 1) + " linewidth must be > 0");
        if (!(sensors[i].epsilon > 0))
            throw RangeError("epsilon", "sensor " + std::to_string(i + 1) + " coupling must be > 0");
        if (!std::isfinite(sensors[i].omega))
            throw RangeError("omega", "sensor frequency must be finite");
    }

    const int k = static_cast<int>(sensors.size());
    const long newdim = static_cast<long>(m.dim) << k;
    if (newdim > m.dimension_cap) {
        std::ostringstream os;
        os << "DimensionError: " << newdim << " exceeds cap " << m.dimension_cap;
        throw DimensionError(os.str());
    }

    LindbladModel out;
    out.dim = static_cast<int>(newdim);
    out.fock_cutoff = m.fock_cutoff;
    out.dimension_cap = m.dimension_cap;
    out.emission_label = m.emission_label;
    out.truncation_defect = m.truncation_defect;
    out.warnings = m.warnings;

    const int sensor_dim = 1 << k;
    const Eigen::MatrixXcd Is = Eigen::MatrixXcd::Identity(sensor_dim, sensor_dim);
    auto expand = [&](const Eigen::MatrixXcd& op) { return kron(op, Is); };

    for (const auto& [name, op] : m.labels) out.labels[name] = expand(op);
    out.H = expand(m.H);
    for (const auto& j : m.jumps) out.jumps.push_back({j.rate, expand(j.op)});

    const Eigen::MatrixXcd X = out.label(m.emission_label);
    const Eigen::MatrixXcd s = qubit_lower();
    const Eigen::MatrixXcd Isys = Eigen::MatrixXcd::Identity(m.dim, m.dim);
    for (int i = 0; i < k; ++i) {
        Eigen::MatrixXcd si = Isys;
        for (int q = 0; q < k; ++q)
            si = kron(si, q == i ? s : Eigen::MatrixXcd::Identity(2, 2));
        out.H += sensors[size_t(i)].omega * (si.adjoint() * si) +
                 sensors[size_t(i)].epsilon * (X.adjoint() * si + X * si.adjoint());
        out.jumps.push_back({sensors[size_t(i)].Gamma, si});
        add_label(out, "sensor" + std::to_string(i + 1), si);
        if (sensors[size_t(i)].epsilon > 0.1 * sensors[size_t(i)].Gamma)
            out.warnings.push_back("sensor " + std::to_string(i + 1) +
                                   ": epsilon > 0.1 Gamma, filter back-action may be visible");
    }
    check_hermitian(out.H);
    return out;
}

Eigen::SparseMatrix<Cx> liouvillian_matrix(const LindbladModel& m) {
    const int n = m.dim;
    check_hermitian(m.H);

    // d rho/dt = A rho + rho B + sum_k r_k L_k rho L_k+,
    // A = -iH - sum r/2 L+L,  B = +iH - sum r/2 L+L.
    Eigen::MatrixXcd damp = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& j : m.jumps) {
        if (j.rate < 0) throw RangeError("rate", "jump rates must be >= 0");
        damp += (0.5 * j.rate) * (j.op.adjoint() * j.op);
    }
    const Eigen::MatrixXcd A = -I * m.H - damp;
    const Eigen::MatrixXcd B = I * m.H - damp;

    std::vector<Triplet> trip;
    auto nonzeros = [](const Eigen::MatrixXcd& M) {
        std::vector<std::tuple<int, int, Cx>> nz;
        for (int r = 0; r < M.rows(); ++r)
            for (int c = 0; c < M.cols(); ++c)
                if (M(r, c) != 0.0) nz.emplace_back(r, c, M(r, c));
        return nz;
    };

    const auto Anz = nonzeros(A);
    const auto Bnz = nonzeros(B);
    size_t estimate = (Anz.size() + Bnz.size()) * size_t(n);
    for (const auto& j : m.jumps) estimate += nonzeros(j.op).size() * nonzeros(j.op).size();
    trip.reserve(estimate);

    // vec index convention: x[i + n*j] = rho(i, j)
    for (const auto& [i, kcol, v] : Anz)
        for (int j = 0; j < n; ++j) trip.emplace_back(i + n * j, kcol + n * j, v);
    for (const auto& [l, j, v] : Bnz)
        for (int i = 0; i < n; ++i) trip.emplace_back(i + n * j, i + n * l, v);
    for (const auto& jm : m.jumps) {
        const auto Lnz = nonzeros(jm.op);
        for (const auto& [i, kcol, vik] : Lnz)
            for (const auto& [j, l, vjl] : Lnz)
                trip.emplace_back(i + n * j, kcol + n * l, jm.rate * vik * std::conj(vjl));
    }

    SpMat Lv(n * n, n * n);
    Lv.setFromTriplets(trip.begin(), trip.end());
    Lv.makeCompressed();
    return Lv;
}

namespace {

Eigen::MatrixXcd unvec(const Eigen::VectorXcd& x, int n) {
    Eigen::MatrixXcd M(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) M(i, j) = x(i + n * j);
    return M;
}

Eigen::VectorXcd vec(const Eigen::MatrixXcd& M) {
    const int n = static_cast<int>(M.rows());
    Eigen::VectorXcd x(n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) x(i + n * j) = M(i, j);
    return x;
}

} // namespace

Eigen::MatrixXcd steady_state_density(const LindbladModel& m) {
    const int n = m.dim;
    const SpMat Lv = liouvillian_matrix(m);

    // Border the generator with the trace functional: since the left null
    // vector of Lv is vec(I), e_0 is never in range(Lv), so solutions of
    // (Lv + e_0 tr) x = e_0 are exactly the trace-one null vectors, and the
    // bordered matrix is singular iff the null space is degenerate.
    SpMat M = Lv;
    {
        std::vector<Triplet> trip;
        trip.reserve(size_t(n));
        for (int j = 0; j < n; ++j) trip.emplace_back(0, j * (n + 1), Cx(1.0, 0.0));
        SpMat Tr(n * n, n * n);
        Tr.setFromTriplets(trip.begin(), trip.end());
        M = M + Tr;
    }
    M.makeCompressed();

    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> solver;
    solver.analyzePattern(M);
    solver.factorize(M);
    if (solver.info() != Eigen::Success)
        throw DegenerateSteadyStateError(
            "DegenerateSteadyStateError: bordered generator is singular (steady state not unique)");

    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n * n);
    rhs(0) = 1.0;
    Eigen::VectorXcd x = solver.solve(rhs);
    for (int pass = 0; pass < 3; ++pass) {
        const double res = (Lv * x).cwiseAbs().maxCoeff();
        if (res <= 1e-12) break;
        x += solver.solve(rhs - M * x);
    }
    const double res = (Lv * x).cwiseAbs().maxCoeff();
    if (!(res <= 1e-10))
        throw DegenerateSteadyStateError(
            "DegenerateSteadyStateError: generator residual " + std::to_string(res) +
            " (near-degenerate null space)");

    Eigen::MatrixXcd rho = unvec(x, n);
    const Cx tr = rho.trace();
    if (std::abs(tr) < 1e-6 || x.cwiseAbs().maxCoeff() > 1e8)
        throw DegenerateSteadyStateError(
            "DegenerateSteadyStateError: null vector is traceless or unbounded");
    rho /= tr;

    // A unique steady state is Hermitian; a non-Hermitian null vector means
    // the factorization slid through a (near-)degenerate null space.
    const double asym = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (asym > 1e-9)
        throw DegenerateSteadyStateError(
            "DegenerateSteadyStateError: non-Hermitian null vector (steady state not unique)");
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9)
        throw NumericalError("steady state has eigenvalue below -1e-9");

    // Uniqueness probe: deflated inverse iteration on (L - eps). The shift
    // keeps the matrix nonsingular (the generator's spectrum lies in
    // Re <= 0), and any second null direction survives the deflation with
    // a vanishing generator residual.
    {
        double scale = 0.0;
        for (int kk = 0; kk < Lv.outerSize(); ++kk) {
            double rowsum = 0.0;
            for (SpMat::InnerIterator it(Lv, kk); it; ++it) rowsum += std::abs(it.value());
            scale = std::max(scale, rowsum);
        }
        scale = std::max(scale, 1e-12);
        const double eps = 1e-8 * scale;
        SpMat Ls = Lv;
        for (int d = 0; d < n * n; ++d) Ls.coeffRef(d, d) -= eps;
        Ls.makeCompressed();
        Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> shifted;
        shifted.analyzePattern(Ls);
        shifted.factorize(Ls);
        if (shifted.info() == Eigen::Success) {
            std::mt19937 rng(0x5eed);
            std::normal_distribution<double> nd;
            Eigen::VectorXcd y(n * n);
            for (int i = 0; i < n * n; ++i) y(i) = Cx(nd(rng), nd(rng));
            const Eigen::VectorXcd xhat = x / x.norm();
            for (int it = 0; it < 12; ++it) {
                y = shifted.solve(y);
                y -= xhat * xhat.dot(y);
                const double norm = y.norm();
                if (!(norm > 0) || !std::isfinite(norm)) break;
                y /= norm;
            }
            const double second_residual = (Lv * y).norm();
            if (std::isfinite(second_residual) && second_residual <= 1e-10 * scale)
                throw DegenerateSteadyStateError(
                    "DegenerateSteadyStateError: a second stationary direction exists");
        }
    }
    return rho;
}

Eigen::MatrixXcd evolve(const LindbladModel& m, const Eigen::MatrixXcd& rho0, double t) {
    if (rho0.rows() != m.dim || rho0.cols() != m.dim)
        throw RangeError("rho0", "dimension mismatch");
    if (t < 0) throw StepFailureError("StepFailureError: negative time");
    if (t == 0) return rho0;

    const SpMat Lv = liouvillian_matrix(m);
    auto f = [&Lv](const Eigen::VectorXcd& y) -> Eigen::VectorXcd { return Lv * y; };
    const Cx tr0 = rho0.trace();
    Eigen::VectorXcd x = detail::integrate_rk45(f, vec(rho0), 0.0, t, 1e-12, 1e-11);
    Eigen::MatrixXcd rho = unvec(x, m.dim);
    if (std::abs(rho.trace() - tr0) > 1e-9 * std::max(1.0, std::abs(tr0)))
        throw NumericalError("evolution lost trace beyond 1e-9");
    return rho;
}

std::vector<double> tau_grid(double tau_max, int points) {
    if (!(tau_max > 0) || points < 2) throw RangeError("tau", "need tau_max > 0, points >= 2");
    std::vector<double> g(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i) g[size_t(i)] = tau_max * i / (points - 1);
    return g;
}

CorrelatorSeries two_time_correlator(const LindbladModel& m, const std::string& A,
                                     const std::string& B, const std::vector<double>& grid) {
    if (grid.size() < 2 || grid.front() != 0.0)
        throw RangeError("tau_grid", "must start at 0 with at least 2 points");
    for (size_t i = 0; i + 1 < grid.size(); ++i)
        if (!(grid[i] < grid[i + 1])) throw RangeError("tau_grid", "must be strictly increasing");

    const Eigen::MatrixXcd& opA = m.label(A);
    const Eigen::MatrixXcd& opB = m.label(B);
    const Eigen::MatrixXcd rho_ss = steady_state_density(m);
    const SpMat Lv = liouvillian_matrix(m);
    auto f = [&Lv](const Eigen::VectorXcd& y) -> Eigen::VectorXcd { return Lv * y; };

    CorrelatorSeries c;
    c.tau = grid;
    c.labelA = A;
    c.labelB = B;
    c.values.resize(grid.size());

    Eigen::VectorXcd x = vec(rho_ss * opA);
    auto record = [&](size_t k) {
        Cx acc = 0.0;
        const Eigen::MatrixXcd X = unvec(x, m.dim);
        for (int i = 0; i < m.dim; ++i)
            for (int j = 0; j < m.dim; ++j) acc += opB(i, j) * X(j, i);
        c.values[k] = acc;
    };
    record(0);
    for (size_t k = 1; k < grid.size(); ++k) {
        x = detail::integrate_rk45(f, x, grid[k - 1], grid[k], 1e-12, 1e-10);
        record(k);
    }
    return c;
}

SpectrumResult spectrum_from_correlator(const CorrelatorSeries& c,
                                        const std::vector<double>& omega_grid) {
    if (c.tau.size() != c.values.size() || c.tau.size() < 2)
        throw RangeError("correlator", "inconsistent series");
    for (size_t i = 0; i + 1 < omega_grid.size(); ++i)
        if (!(omega_grid[i] < omega_grid[i + 1]))
            throw RangeError("omega", "grid must be strictly increasing");

    const double v0 = c.values.front().real();
    if (std::abs(v0) < 1e-14)
        throw ZeroPopulationError("ZeroPopulationError: correlator starts at zero");

    const size_t nt = c.tau.size();
    std::vector<double> w(nt, 0.0);
    for (size_t k = 0; k + 1 < nt; ++k) {
        const double h = c.tau[k + 1] - c.tau[k];
        w[k] += 0.5 * h;
        w[k + 1] += 0.5 * h;
    }

    bool uniform = true;
    const double h0 = c.tau[1] - c.tau[0];
    for (size_t k = 0; k + 1 < nt; ++k)
        uniform = uniform && std::abs((c.tau[k + 1] - c.tau[k]) - h0) < 1e-12 * h0;

    SpectrumResult s;
    s.mode = SpectrumMode::fourier;
    s.channel = c.labelB == "sigma1" || c.labelB == "sigma"
                    ? Channel::exciton1
                    : (c.labelB == "sigma2" ? Channel::exciton2 : Channel::cavity);
    s.omega = omega_grid;
    s.values.resize(omega_grid.size());
    s.tail_warning = std::abs(c.values.back()) > 1e-4 * std::abs(c.values.front());

    const double pref = 1.0 / (M_PI * v0);
    for (size_t q = 0; q < omega_grid.size(); ++q) {
        const double om = omega_grid[q];
        Cx acc = 0.0;
        if (uniform) {
            const Cx step = std::exp(I * om * h0);
            Cx phase = 1.0;
            for (size_t k = 0; k < nt; ++k) {
                acc += w[k] * c.values[k] * phase;
                phase *= step;
            }
        } else {
            for (size_t k = 0; k < nt; ++k) acc += w[k] * c.values[k] * std::exp(I * om * c.tau[k]);
        }
        s.values[q] = pref * acc.real();
    }
    return s;
}

std::complex<double> expectation(const Eigen::MatrixXcd& op, const Eigen::MatrixXcd& rho) {
    Cx acc = 0.0;
    for (Eigen::Index i = 0; i < op.rows(); ++i)
        for (Eigen::Index j = 0; j < op.cols(); ++j) acc += op(i, j) * rho(j, i);
    return acc;
}

G2Result sensor_g2(const LindbladModel& m, const SensorSpec& s1, const SensorSpec& s2) {
    auto run = [&](double scale) {
        SensorSpec a = s1, b = s2;
        a.epsilon *= scale;
        b.epsilon *= scale;
        const LindbladModel probed = attach_sensors(m, {a, b});
        const Eigen::MatrixXcd rho = steady_state_density(probed);
        const Eigen::MatrixXcd& n1op = probed.label("sensor1");
        const Eigen::MatrixXcd& n2op = probed.label("sensor2");
        const Eigen::MatrixXcd pop1 = n1op.adjoint() * n1op;
        const Eigen::MatrixXcd pop2 = n2op.adjoint() * n2op;
        const double n1 = expectation(pop1, rho).real();
        const double n2 = expectation(pop2, rho).real();
        const double n12 = expectation(pop1 * pop2, rho).real();
        if (!(n1 > 0) || !(n2 > 0))
            throw NumericalError("sensor populations vanish; g2 undefined");
        return std::tuple<double, double, double>{n12 / (n1 * n2), n1, n2};
    };

    G2Result out;
    auto [g2, n1, n2] = run(1.0);
    auto [g2h, n1h, n2h] = run(0.5);
    (void)n1h;
    (void)n2h;
    out.value = g2;
    out.n1 = n1;
    out.n2 = n2;
    out.delta = std::abs(g2 - g2h);
    out.converged = out.delta <= 0.01 * std::abs(g2);
    return out;
}

Eigen::MatrixXcd partial_trace_last_qubits(const Eigen::MatrixXcd& rho, int qubits) {
    const int env = 1 << qubits;
    const int sys = static_cast<int>(rho.rows()) / env;
    if (sys * env != rho.rows()) throw RangeError("rho", "dimension not divisible");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(sys, sys);
    for (int i = 0; i < sys; ++i)
        for (int j = 0; j < sys; ++j)
            for (int s = 0; s < env; ++s) out(i, j) += rho(i * env + s, j * env + s);
    return out;
}

} // namespace veecav

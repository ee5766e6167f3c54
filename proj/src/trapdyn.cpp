#include "trapdyn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "units.hpp"

namespace polyion::trapdyn {

using Eigen::Matrix3d;
using Eigen::Vector3d;
using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

void TrapConfig::validate() const
{
    if (!(secular_atom.minCoeff() > 0.0))
        throw std::invalid_argument("secular frequencies must be positive");
    if (!(atom_mass > 0.0 && molecule_mass > 0.0))
        throw std::invalid_argument("masses must be positive");
    if (!(charge > 0.0)) throw std::invalid_argument("charge must be positive");
}

Vector3d TrapConfig::secular_of(int ion) const
{
    if (ion == 0) return secular_atom;
    const double ratio = atom_mass / molecule_mass;
    // RF radial pseudopotential scales as 1/m, DC axial as 1/sqrt(m)
    return {secular_atom(0) * ratio, secular_atom(1) * ratio,
            secular_atom(2) * std::sqrt(ratio)};
}

namespace {

double coulomb_pref(const TrapConfig& trap)
{
    return units::coulomb_k * trap.charge * trap.charge;
}

// gradient of trap + Coulomb potential at x = (r_atom, r_mol), newtons
Vector6d potential_gradient(const TrapConfig& trap, const Vector6d& x, bool with_coulomb)
{
    Vector6d g;
    for (int ion = 0; ion < 2; ++ion) {
        const Vector3d w2 = trap.secular_of(ion).array().square();
        g.segment<3>(3 * ion) =
            trap.mass_of(ion) * w2.asDiagonal() * x.segment<3>(3 * ion);
    }
    if (with_coulomb) {
        const Vector3d r = x.head<3>() - x.tail<3>();
        const double d = r.norm();
        const Vector3d f = coulomb_pref(trap) * r / (d * d * d);
        g.head<3>() -= f;
        g.tail<3>() += f;
    }
    return g;
}

Matrix6d potential_hessian(const TrapConfig& trap, const Vector6d& x, bool with_coulomb)
{
    Matrix6d H = Matrix6d::Zero();
    for (int ion = 0; ion < 2; ++ion) {
        const Vector3d w2 = trap.secular_of(ion).array().square();
        H.block<3, 3>(3 * ion, 3 * ion) = trap.mass_of(ion) * Matrix3d(w2.asDiagonal());
    }
    if (with_coulomb) {
        const Vector3d r = x.head<3>() - x.tail<3>();
        const double d = r.norm();
        const Matrix3d S = coulomb_pref(trap) *
                           (3.0 * r * r.transpose() / std::pow(d, 5) -
                            Matrix3d::Identity() / (d * d * d));
        H.block<3, 3>(0, 0) += S;
        H.block<3, 3>(3, 3) += S;
        H.block<3, 3>(0, 3) -= S;
        H.block<3, 3>(3, 0) -= S;
    }
    return H;
}

double potential_value(const TrapConfig& trap, const Vector6d& x, bool with_coulomb)
{
    double v = 0.0;
    for (int ion = 0; ion < 2; ++ion) {
        const Vector3d w2 = trap.secular_of(ion).array().square();
        v += 0.5 * trap.mass_of(ion) * w2.dot(x.segment<3>(3 * ion).array().square().matrix());
    }
    if (with_coulomb) v += coulomb_pref(trap) / (x.head<3>() - x.tail<3>()).norm();
    return v;
}

}  // namespace

Vector6d equilibrium_positions(const TrapConfig& trap, bool with_coulomb)
{
    trap.validate();
    const Vector3d wa = trap.secular_of(0);
    if (!(wa(2) < wa(0) && wa(2) < wa(1)))
        throw std::invalid_argument("axial alignment requires omega_z < omega_x, omega_y");

    Vector6d x = Vector6d::Zero();
    if (with_coulomb) {
        // two-ion axial guess; m omega_z^2 is nearly equal for both ions
        const double mw2 = trap.atom_mass * wa(2) * wa(2);
        const double d = std::cbrt(2.0 * coulomb_pref(trap) / mw2);
        x(2) = -d / 2.0;
        x(5) = d / 2.0;
    } else {
        return x;  // harmonic only: both ions at origin
    }

    for (int it = 0; it < 200; ++it) {
        const Vector6d g = potential_gradient(trap, x, with_coulomb);
        if (g.lpNorm<Eigen::Infinity>() < 1e-14) return x;
        const Matrix6d H = potential_hessian(trap, x, with_coulomb);
        const Vector6d step = H.ldlt().solve(g);
        x -= step;
    }
    const double res = potential_gradient(trap, x, with_coulomb).lpNorm<Eigen::Infinity>();
    if (res < 1e-12) return x;
    std::ostringstream os;
    os << "equilibrium search did not converge, residual " << res << " N";
    throw std::runtime_error(os.str());
}

NormalModes normal_modes(const TrapConfig& trap, bool with_coulomb)
{
    NormalModes nm;
    nm.equilibrium = equilibrium_positions(trap, with_coulomb);
    nm.potential_min = potential_value(trap, nm.equilibrium, with_coulomb);

    Matrix6d H = potential_hessian(trap, nm.equilibrium, with_coulomb);
    Vector6d inv_sqrt_m;
    for (int ion = 0; ion < 2; ++ion)
        inv_sqrt_m.segment<3>(3 * ion).setConstant(1.0 / std::sqrt(trap.mass_of(ion)));
    const Matrix6d W = inv_sqrt_m.asDiagonal() * H * inv_sqrt_m.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Matrix6d> es(W);
    if (es.eigenvalues().minCoeff() < -1e-6 * es.eigenvalues().maxCoeff())
        throw std::invalid_argument("unstable trap: Hessian not positive definite");
    nm.frequencies = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    nm.modes = es.eigenvectors();
    return nm;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream)
{
    // splitmix64 over seed ^ golden-ratio stream offset
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

InitialCondition sample_thermal_state(const TrapConfig& trap, const NormalModes& nm, double T,
                                      std::uint64_t seed)
{
    if (T < 0.0) throw std::domain_error("temperature must be non-negative");
    Vector6d xi = Vector6d::Zero();   // mass-weighted displacement
    Vector6d eta = Vector6d::Zero();  // mass-weighted velocity
    if (T > 0.0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double s = std::sqrt(units::kB * T);
        for (int i = 0; i < 6; ++i) {
            // mean kB T per mode: kB T/2 potential + kB T/2 kinetic
            xi(i) = s / nm.frequencies(i) * gauss(rng);
            eta(i) = s * gauss(rng);
        }
        xi = (nm.modes * xi).eval();
        eta = (nm.modes * eta).eval();
    }
    InitialCondition ic;
    for (int ion = 0; ion < 2; ++ion) {
        const double ism = 1.0 / std::sqrt(trap.mass_of(ion));
        ic.pos[ion] = nm.equilibrium.segment<3>(3 * ion) + ism * xi.segment<3>(3 * ion);
        ic.vel[ion] = ism * eta.segment<3>(3 * ion);
    }
    return ic;
}

EnsembleTrajectory integrate(const TrapConfig& trap, const NormalModes& nm,
                             const InitialCondition& init, const IntegrateOptions& opt)
{
    trap.validate();
    if (!(opt.t_end > 0.0 && opt.dt > 0.0)) throw std::invalid_argument("t_end, dt must be positive");

    double omega_max = nm.frequencies.maxCoeff();
    for (const auto& pot : opt.potentials)
        if (pot.U0 > 0.0)
            omega_max = std::max(omega_max,
                                 optics::lattice_secular_frequency(pot, trap.molecule_mass));
    if (opt.dt > 2.0 * M_PI / omega_max / 50.0)
        throw std::invalid_argument("dt too large: must resolve the fastest mode by 50x");

    // Poisson flip schedule; first flip at t = 0 (initial pi-pulse)
    std::vector<double> flip_times;
    if (opt.flips) {
        if (opt.flips->rate < 0.0) throw std::invalid_argument("flip rate must be non-negative");
        flip_times.push_back(0.0);
        if (opt.flips->rate > 0.0) {
            std::mt19937_64 rng(opt.flips->seed);
            std::exponential_distribution<double> gap(opt.flips->rate);
            double t = 0.0;
            while (true) {
                t += gap(rng);
                if (t >= opt.t_end) break;
                flip_times.push_back(t);
            }
        }
    }

    const int n_steps = (int)std::llround(opt.t_end / opt.dt);
    EnsembleTrajectory traj;
    traj.flip_times = flip_times;
    const int n_rec = n_steps / opt.record_stride + 1;
    traj.times.reserve(n_rec);
    traj.pos_atom.reserve(n_rec);
    traj.pos_mol.reserve(n_rec);
    traj.vel_atom.reserve(n_rec);
    traj.vel_mol.reserve(n_rec);
    traj.internal_label.reserve(n_rec);
    traj.energies.reserve(n_rec);
    traj.lattice_impulse.reserve(n_rec);
    traj.flip_count.reserve(n_rec);

    Vector3d r[2] = {init.pos[0], init.pos[1]};
    Vector3d v[2] = {init.vel[0], init.vel[1]};
    const double m[2] = {trap.atom_mass, trap.molecule_mass};
    const Vector3d w2[2] = {trap.secular_of(0).array().square(),
                            trap.secular_of(1).array().square()};
    const double kq2 = coulomb_pref(trap);
    const Vector3d axis = opt.lattice_direction.normalized();

    int label = opt.initial_label;
    std::size_t next_flip = 0;
    int flips_done = 0;
    double impulse = 0.0;

    auto lattice_force = [&](double s) -> double {
        if (opt.potentials.empty()) return 0.0;
        return -opt.potentials.at(label).slope(s);
    };
    auto accel = [&](Vector3d a[2], double& f_lat) {
        const Vector3d rr = r[0] - r[1];
        const double d = rr.norm();
        const Vector3d fc = kq2 * rr / (d * d * d);
        a[0] = -w2[0].cwiseProduct(r[0]) + fc / m[0];
        a[1] = -w2[1].cwiseProduct(r[1]) - fc / m[1];
        f_lat = lattice_force(r[1].dot(axis));
        a[1] += f_lat / m[1] * axis;
    };
    auto secular_energy = [&]() {
        Vector6d x;
        x << r[0], r[1];
        double e = potential_value(trap, x, true) - nm.potential_min;
        e += 0.5 * m[0] * v[0].squaredNorm() + 0.5 * m[1] * v[1].squaredNorm();
        return e;
    };
    auto record = [&](double t) {
        traj.times.push_back(t);
        traj.pos_atom.push_back(r[0]);
        traj.pos_mol.push_back(r[1]);
        traj.vel_atom.push_back(v[0]);
        traj.vel_mol.push_back(v[1]);
        traj.internal_label.push_back(label);
        traj.energies.push_back(secular_energy());
        traj.lattice_impulse.push_back(impulse);
        traj.flip_count.push_back(flips_done);
    };

    // flips scheduled at t = 0 fire before the first step
    while (next_flip < flip_times.size() && flip_times[next_flip] <= 0.0) {
        label = (label == opt.flips->label_lo) ? opt.flips->label_hi : opt.flips->label_lo;
        ++next_flip;
        ++flips_done;
    }

    record(0.0);
    Vector3d a[2];
    double f_lat = 0.0;
    accel(a, f_lat);

    const double abort_energy = 1e6 * units::kB;
    for (int step = 1; step <= n_steps; ++step) {
        const double t_new = step * opt.dt;
        v[0] += 0.5 * opt.dt * a[0];
        v[1] += 0.5 * opt.dt * a[1];
        r[0] += opt.dt * v[0];
        r[1] += opt.dt * v[1];
        while (next_flip < flip_times.size() && flip_times[next_flip] <= t_new) {
            label = (label == opt.flips->label_lo) ? opt.flips->label_hi : opt.flips->label_lo;
            ++next_flip;
            ++flips_done;
        }
        accel(a, f_lat);
        v[0] += 0.5 * opt.dt * a[0];
        v[1] += 0.5 * opt.dt * a[1];
        impulse += f_lat * opt.dt;

        if (step % opt.record_stride == 0) {
            record(t_new);
            if (traj.energies.back() > abort_energy)
                throw std::runtime_error("trajectory aborted: energy exceeds 1e6 kB K");
        }
    }
    return traj;
}

double temperature_of(const EnsembleTrajectory& traj, const NormalModes& nm, double window)
{
    if (traj.times.empty()) throw std::domain_error("empty trajectory");
    const double t_end = traj.times.back();
    const double span = t_end - traj.times.front();
    if (window > span + 1e-15) throw std::domain_error("window exceeds trajectory span");
    const double period = 2.0 * M_PI / nm.frequencies.minCoeff();
    if (window < 5.0 * period)
        throw std::domain_error("window must cover at least 5 motional periods");
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.times[i] < t_end - window) continue;
        sum += traj.energies[i];
        ++n;
    }
    return sum / n / (6.0 * units::kB);
}

namespace {

struct LineFit {
    double slope, intercept, r2;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y)
{
    const int n = (int)x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    LineFit f;
    f.slope = (n * sxy - sx * sy) / den;
    f.intercept = (sy - f.slope * sx) / n;
    double ss_res = 0.0, ss_tot = 0.0;
    const double ybar = sy / n;
    for (int i = 0; i < n; ++i) {
        const double yi = f.intercept + f.slope * x[i];
        ss_res += (y[i] - yi) * (y[i] - yi);
        ss_tot += (y[i] - ybar) * (y[i] - ybar);
    }
    f.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

}  // namespace

HeatingResult heating_rate(const TrapConfig& trap, const IntegrateOptions& opt, double T_init,
                           int n_traj, std::uint64_t seed, int n_threads, int n_bins)
{
    if (n_traj < 2) throw std::domain_error("need at least 2 trajectories");
    const NormalModes nm = normal_modes(trap);

    // per-trajectory binned temperatures, indexed deterministically
    std::vector<std::vector<double>> temps(n_traj);
    std::vector<double> bin_times(n_bins);
    const double bin_dt = opt.t_end / n_bins;
    for (int b = 0; b < n_bins; ++b) bin_times[b] = (b + 0.5) * bin_dt;

    auto run_one = [&](int i) {
        IntegrateOptions o = opt;
        if (o.flips) o.flips->seed = mix_seed(seed, 2 * i + 1);
        const InitialCondition ic = sample_thermal_state(trap, nm, T_init, mix_seed(seed, 2 * i));
        const EnsembleTrajectory traj = integrate(trap, nm, ic, o);
        std::vector<double> esum(n_bins, 0.0);
        std::vector<int> cnt(n_bins, 0);
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            int b = std::min(n_bins - 1, (int)(traj.times[k] / bin_dt));
            esum[b] += traj.energies[k];
            ++cnt[b];
        }
        temps[i].resize(n_bins);
        for (int b = 0; b < n_bins; ++b)
            temps[i][b] = esum[b] / std::max(1, cnt[b]) / (6.0 * units::kB);
    };

    n_threads = std::max(1, n_threads);
    if (n_threads == 1) {
        for (int i = 0; i < n_traj; ++i) run_one(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back([&] {
                for (int i = next++; i < n_traj; i = next++) run_one(i);
            });
        for (auto& th : pool) th.join();
    }

    std::vector<double> mean_T(n_bins, 0.0);
    for (int i = 0; i < n_traj; ++i)
        for (int b = 0; b < n_bins; ++b) mean_T[b] += temps[i][b];
    for (auto& t : mean_T) t /= n_traj;

    const LineFit fit = fit_line(bin_times, mean_T);
    std::vector<double> slopes(n_traj);
    for (int i = 0; i < n_traj; ++i) slopes[i] = fit_line(bin_times, temps[i]).slope;
    double mu = 0.0;
    for (double s : slopes) mu += s;
    mu /= n_traj;
    double var = 0.0;
    for (double s : slopes) var += (s - mu) * (s - mu);
    var /= (n_traj - 1);

    HeatingResult res;
    res.rate = fit.slope;
    res.stderr_ = std::sqrt(var / n_traj);
    res.n_traj = n_traj;
    res.r_squared = fit.r2;
    res.bin_times = bin_times;
    res.bin_temps = mean_T;
    return res;
}

}  // namespace polyion::trapdyn

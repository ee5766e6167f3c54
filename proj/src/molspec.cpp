#include "molspec.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "units.hpp"
#include "wigner.hpp"

namespace polyion::molspec {

void MolecularSpecies::validate() const
{
    if (!(A >= B && B >= C && C > 0.0))
        throw std::invalid_argument("rotational constants must satisfy A >= B >= C > 0");
    if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
    const double mu_max = 100.0 * units::debye;
    for (double mu : {mu_a, mu_b, mu_c})
        if (std::abs(mu) > mu_max)
            throw std::invalid_argument("dipole component exceeds 100 Debye sanity bound");
    if (!(alpha_mean() > 0.0))
        throw std::invalid_argument("mean polarizability must be positive");
}

int LevelTable::distinct_levels() const
{
    std::map<std::tuple<int, int, int>, int> seen;
    for (const auto& s : levels) seen[{s.J, s.Ka, s.Kc}] = 1;
    return (int)seen.size();
}

int LevelTable::find(int J, int Ka, int Kc, int m) const
{
    for (int i = 0; i < (int)levels.size(); ++i) {
        const auto& s = levels[i];
        if (s.J == J && s.Ka == Ka && s.Kc == Kc && s.m == m) return i;
    }
    return -1;
}

Eigen::MatrixXd build_hamiltonian_block(const MolecularSpecies& sp, int J)
{
    if (J < 0) throw std::domain_error("J must be non-negative");
    sp.validate();
    const int n = 2 * J + 1;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    const double jj = (double)J * (J + 1);
    const double bc_p = 0.5 * (sp.B + sp.C);
    const double bc_m = 0.25 * (sp.B - sp.C);
    for (int k = -J; k <= J; ++k) {
        H(k + J, k + J) = bc_p * (jj - k * k) + sp.A * k * k;
        if (k + 2 <= J) {
            const double el = bc_m * std::sqrt((jj - k * (k + 1)) * (jj - (k + 1) * (k + 2)));
            H(k + 2 + J, k + J) = el;
            H(k + J, k + 2 + J) = el;
        }
    }
    return H;
}

LevelTable solve_levels(const MolecularSpecies& sp, int J_max, double cutoff)
{
    if (J_max < 0) throw std::domain_error("J_max must be non-negative");
    if (cutoff < 0.0) throw std::domain_error("cutoff must be non-negative");
    sp.validate();

    LevelTable table;
    table.species = sp;
    table.max_energy_cutoff = cutoff;

    for (int J = 0; J <= J_max; ++J) {
        const Eigen::MatrixXd H = build_hamiltonian_block(sp, J);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        for (int i = 0; i < 2 * J + 1; ++i) {
            const double energy = es.eigenvalues()(i);  // E(0_00) = 0 exactly
            if (energy > cutoff) continue;
            Eigen::VectorXd v = es.eigenvectors().col(i);
            // deterministic sign: largest-magnitude coefficient positive
            int imax = 0;
            v.cwiseAbs().maxCoeff(&imax);
            if (v(imax) < 0.0) v = -v;
            RotationalState st;
            st.J = J;
            st.Ka = (i + 1) / 2;
            st.Kc = J - i / 2;
            st.energy = energy;
            st.eigvec = v;
            for (int m = -J; m <= J; ++m) {
                st.m = m;
                table.levels.push_back(st);
            }
        }
    }
    std::stable_sort(table.levels.begin(), table.levels.end(),
                     [](const RotationalState& x, const RotationalState& y) {
                         return std::tie(x.energy, x.J, x.Ka, x.Kc, x.m) <
                                std::tie(y.energy, y.J, y.Ka, y.Kc, y.m);
                     });
    return table;
}

std::vector<double> thermal_populations(const LevelTable& table, double T)
{
    if (table.levels.empty()) throw std::domain_error("level table is empty");
    if (!(T > 0.0)) throw std::domain_error("temperature must be positive");
    std::vector<double> p(table.levels.size());
    const double beta = units::h / (units::kB * T);
    double z = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        p[i] = std::exp(-beta * table.levels[i].energy);
        z += p[i];
    }
    for (auto& x : p) x /= z;
    return p;
}

double line_strength(const LevelTable& table, int lo_id, int up_id, int axis)
{
    const RotationalState& lo = table.levels.at(lo_id);
    const RotationalState& up = table.levels.at(up_id);
    std::complex<double> K = 0.0;
    for (int k = -lo.J; k <= lo.J; ++k) {
        const double v = lo.eigvec(k + lo.J);
        if (v == 0.0) continue;
        for (int q = -1; q <= 1; ++q) {
            const int kp = k + q;
            if (kp < -up.J || kp > up.J) continue;
            const std::complex<double> cq = axis_spherical_coeff(axis, q);
            if (cq == 0.0) continue;
            const double sign = (kp % 2 == 0) ? 1.0 : -1.0;
            K += up.eigvec(kp + up.J) * v * sign * cq *
                 wigner3j(lo.J, 1, up.J, k, q, -kp);
        }
    }
    return (2.0 * lo.J + 1.0) * (2.0 * up.J + 1.0) * std::norm(K);
}

TransitionCatalog allowed_transitions(const LevelTable& table, const MolecularSpecies& sp,
                                      double f_min, double f_max)
{
    if (!(f_min >= 0.0 && f_min < f_max))
        throw std::domain_error("require 0 <= f_min < f_max");

    // distinct (J,Ka,Kc) levels, represented by their first state id
    struct Level {
        int id;
        int J, Ka, Kc;
        double energy;
    };
    std::vector<Level> lv;
    std::map<std::tuple<int, int, int>, int> seen;
    for (int i = 0; i < table.size(); ++i) {
        const auto& s = table.levels[i];
        auto key = std::make_tuple(s.J, s.Ka, s.Kc);
        if (seen.count(key)) continue;
        seen[key] = 1;
        lv.push_back({i, s.J, s.Ka, s.Kc, s.energy});
    }

    const double mu[3] = {sp.mu_a, sp.mu_b, sp.mu_c};
    TransitionCatalog cat;
    for (size_t a = 0; a < lv.size(); ++a) {
        for (size_t b = a + 1; b < lv.size(); ++b) {
            const Level& lo = lv[a].energy <= lv[b].energy ? lv[a] : lv[b];
            const Level& up = lv[a].energy <= lv[b].energy ? lv[b] : lv[a];
            const int dJ = std::abs(up.J - lo.J);
            if (dJ > 1) continue;
            if (lo.J == 0 && up.J == 0) continue;
            const double f = up.energy - lo.energy;
            if (!(f > 0.0) || f < f_min || f > f_max) continue;
            const int dKa = std::abs(up.Ka - lo.Ka) % 2;
            const int dKc = std::abs(up.Kc - lo.Kc) % 2;
            int axis;
            if (dKa == 0 && dKc == 1) axis = 0;       // a-type
            else if (dKa == 1 && dKc == 1) axis = 1;  // b-type
            else if (dKa == 1 && dKc == 0) axis = 2;  // c-type
            else continue;
            if (mu[axis] == 0.0) continue;
            const double S = line_strength(table, lo.id, up.id, axis);
            if (S <= 1e-12) continue;
            cat.entries.push_back({lo.id, up.id, f, S, (TransitionType)axis});
        }
    }
    std::sort(cat.entries.begin(), cat.entries.end(),
              [](const Transition& x, const Transition& y) { return x.frequency < y.frequency; });
    return cat;
}

}  // namespace polyion::molspec

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "devo/biorobots/params.hpp"
#include "devo/errors.hpp"
#include "devo/rng.hpp"

namespace devo::biorobots {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double norm(Vec2 v) { return std::sqrt(v.x * v.x + v.y * v.y); }

/// Square lattice of node-centered samples; node (i,j) sits at
/// ((i+0.5)h, (j+0.5)h). Bilinear interpolation clamps to the node hull.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(int nx, int ny, double h, double fill = 0.0)
        : nx_(nx), ny_(ny), h_(h), data_(static_cast<std::size_t>(nx) * ny, fill) {}

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double spacing() const { return h_; }
    double& at(int i, int j) { return data_[static_cast<std::size_t>(j) * nx_ + i]; }
    double at(int i, int j) const { return data_[static_cast<std::size_t>(j) * nx_ + i]; }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }
    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    int node_i(double x) const {
        return std::clamp(static_cast<int>(std::floor(x / h_)), 0, nx_ - 1);
    }
    int node_j(double y) const {
        return std::clamp(static_cast<int>(std::floor(y / h_)), 0, ny_ - 1);
    }

    double sample(Vec2 p) const {
        const double u = p.x / h_ - 0.5;
        const double v = p.y / h_ - 0.5;
        const int i0 = std::clamp(static_cast<int>(std::floor(u)), 0, nx_ - 2);
        const int j0 = std::clamp(static_cast<int>(std::floor(v)), 0, ny_ - 2);
        const double fu = std::clamp(u - i0, 0.0, 1.0);
        const double fv = std::clamp(v - j0, 0.0, 1.0);
        const double a = at(i0, j0) * (1 - fu) + at(i0 + 1, j0) * fu;
        const double b = at(i0, j0 + 1) * (1 - fu) + at(i0 + 1, j0 + 1) * fu;
        return a * (1 - fv) + b * fv;
    }

private:
    int nx_ = 0;
    int ny_ = 0;
    double h_ = 1.0;
    std::vector<double> data_;
};

struct CancerCell {
    Vec2 pos;
    double damage = 0.0;
    bool alive = true;
};

enum class CargoState { idle, attached, released };

struct Cargo {
    Vec2 pos;
    CargoState state = CargoState::idle;
};

struct Worker {
    Vec2 pos;
    Vec2 dir;        // persistence direction, unit length
    int cargo = -1;  // index into cargos(), -1 when unattached
};

/// Reduced two-dimensional tissue patch: a disc of cancer cells depletes a
/// diffusing oxygen field, and motile workers ferry drug-filled cargo toward
/// the hypoxic core along oxygen gradients.
///
/// Cancer cells respond only to oxygen, to each other, and to the released
/// drug field; they never sense workers or cargo directly, and only cancer
/// cells consume oxygen. Constants tied to carriers this reduction lacks
/// (receptor and secretion thresholds, worker and cargo oxygen uptake,
/// worker apoptosis at its default of zero) are accepted and carried but do
/// not alter the dynamics.
///
/// A world advances sequentially; two worlds built from the same seed and
/// stepped with the same arguments stay bit-identical.
class BiorobotWorld {
public:
    BiorobotWorld(const Schedule& schedule, const TissueConfig& tissue, RngStream seed)
        : tissue_(tissue),
          dt_diffusion_(schedule.dt_diffusion),
          cells_rng_(seed.child(stream::kCells)),
          workers_rng_(seed.child(stream::kWorkers)) {
        if (!(schedule.dt_mechanics > 0) || !(schedule.dt_diffusion > 0))
            throw ConfigError("time steps must be positive");
        const double h = tissue_.grid_spacing;
        const int n = static_cast<int>(std::lround(tissue_.domain_size / h));
        if (n < 4)
            throw DomainTooSmall("tissue grid needs at least 4 nodes per side, got " +
                                 std::to_string(n));
        const double lambda = stability_number(schedule.dt_mechanics);
        if (lambda > 0.25 + 1e-12)
            throw ConfigError(
                "oxygen diffusion is unstable at this resolution (D*dt/h^2 = " +
                std::to_string(lambda) + " > 0.25); shrink dt_diffusion or widen the grid");
        if (schedule.initial_tumor_radius + tissue_.tumor_margin > tissue_.domain_size / 2)
            throw DomainTooSmall("initial tumor radius " +
                                 std::to_string(schedule.initial_tumor_radius) +
                                 " um does not fit the domain with margin");

        o2_ = ScalarField(n, n, h, tissue_.far_field_o2);
        drug_ = ScalarField(n, n, h, 0.0);
        grad_x_ = ScalarField(n, n, h, 0.0);
        grad_y_ = ScalarField(n, n, h, 0.0);
        scratch_ = ScalarField(n, n, h, 0.0);
        uptake_decay_ = ScalarField(n, n, h, 1.0);

        seed_tumor_disc(schedule.initial_tumor_radius);
    }

    /// Place workers and their cargo in a strip along the low-x boundary.
    /// Draws only from the worker stream, so the cancer cell trajectory is
    /// unchanged by when (or whether) this is called.
    void inject_treatment(int workers, int cargo) {
        const double h = tissue_.grid_spacing;
        const double lo = h;
        const double hi = tissue_.domain_size - h;
        for (int c = 0; c < cargo; ++c) {
            Cargo k;
            k.pos = {workers_rng_.uniform(lo, 2 * h), workers_rng_.uniform(lo, hi)};
            cargos_.push_back(k);
        }
        for (int w = 0; w < workers; ++w) {
            Worker wk;
            wk.pos = {workers_rng_.uniform(lo, 2 * h), workers_rng_.uniform(lo, hi)};
            const double a = workers_rng_.uniform(0.0, 2.0 * std::numbers::pi);
            wk.dir = {std::cos(a), std::sin(a)};
            workers_.push_back(wk);
        }
    }

    /// One mechanics step: fields, cancer cell fate, worker motion,
    /// attachment, cargo transport and release, then pairwise forces.
    void step(const DesignParams& design, const SimConstants& consts, double dt) {
        update_fields(consts, dt);
        update_cells(consts, dt);
        move_workers(design, consts, dt);
        attach_workers(consts);
        transport_cargo(design, consts, dt);
        apply_forces(design, consts, dt);

        compact_dead();
        clock_ += dt;
        check_finite();
    }

    double clock() const { return clock_; }
    const ScalarField& oxygen() const { return o2_; }
    const ScalarField& drug() const { return drug_; }
    const std::vector<CancerCell>& cells() const { return cells_; }
    const std::vector<Worker>& workers() const { return workers_; }
    const std::vector<Cargo>& cargos() const { return cargos_; }

    int live_cancer_count() const { return static_cast<int>(cells_.size()); }
    int released_cargo_count() const { return released_; }
    long long cells_created() const { return created_; }
    long long cells_killed_by_drug() const { return died_drug_; }

private:
    void seed_tumor_disc(double radius) {
        const double s = tissue_.cell_spacing;
        const double row_h = s * std::sqrt(3.0) / 2.0;
        const double cx = tissue_.domain_size / 2.0;
        const double cy = tissue_.domain_size / 2.0;
        const int jmax = static_cast<int>(std::floor(radius / row_h)) + 1;
        for (int j = -jmax; j <= jmax; ++j) {
            const double y = cy + j * row_h;
            const double xoff = (j & 1) ? s / 2.0 : 0.0;
            const int imax = static_cast<int>(std::floor(radius / s)) + 1;
            for (int i = -imax; i <= imax; ++i) {
                const double x = cx + xoff + i * s;
                const double dx = x - cx;
                const double dy = y - cy;
                if (dx * dx + dy * dy <= radius * radius + 1e-9)
                    cells_.push_back({{x, y}, 0.0, true});
            }
        }
        created_ = static_cast<long long>(cells_.size());
    }

    double stability_number(double dt_mech) const {
        const int n_sub = substeps_for(dt_mech);
        const double h = tissue_.grid_spacing;
        return tissue_.o2_diffusion * (dt_mech / n_sub) / (h * h);
    }

    int substeps_for(double dt_mech) const {
        return std::max(1, static_cast<int>(std::lround(dt_mech / dt_diffusion_)));
    }

    void update_fields(const SimConstants& consts, double dt) {
        const int n = o2_.nx();
        const int n_sub = substeps_for(dt);
        const double dt_sub = dt / n_sub;
        const double lambda = tissue_.o2_diffusion * dt_sub /
                              (tissue_.grid_spacing * tissue_.grid_spacing);
        if (lambda > 0.25 + 1e-12)
            throw ConfigError("oxygen diffusion unstable for step " + std::to_string(dt));

        // Uptake by cancer cells, applied as a multiplicative decay so the
        // field can never undershoot zero.
        uptake_decay_.fill(0.0);
        for (const CancerCell& c : cells_)
            uptake_decay_.at(o2_.node_i(c.pos.x), o2_.node_j(c.pos.y)) +=
                tissue_.cell_o2_uptake;
        for (double& u : uptake_decay_.data()) u = std::exp(-u * dt_sub);

        for (int sub = 0; sub < n_sub; ++sub) {
            for (int j = 1; j < n - 1; ++j) {
                for (int i = 1; i < n - 1; ++i) {
                    const double c = o2_.at(i, j);
                    const double lap = o2_.at(i - 1, j) + o2_.at(i + 1, j) +
                                       o2_.at(i, j - 1) + o2_.at(i, j + 1) - 4.0 * c;
                    scratch_.at(i, j) = (c + lambda * lap) * uptake_decay_.at(i, j);
                }
            }
            for (int j = 1; j < n - 1; ++j)
                for (int i = 1; i < n - 1; ++i) o2_.at(i, j) = scratch_.at(i, j);
            // Boundary ring stays at the far-field tension.
        }

        if (drug_active_) {
            const double decay = std::exp(-consts.cargo_apoptosis_rate * dt);
            for (double& d : drug_.data()) d *= decay;
        }

        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const int il = std::max(i - 1, 0);
                const int ir = std::min(i + 1, n - 1);
                const int jl = std::max(j - 1, 0);
                const int jr = std::min(j + 1, n - 1);
                grad_x_.at(i, j) = (o2_.at(ir, j) - o2_.at(il, j)) /
                                   ((ir - il) * o2_.spacing());
                grad_y_.at(i, j) = (o2_.at(i, jr) - o2_.at(i, jl)) /
                                   ((jr - jl) * o2_.spacing());
            }
        }
    }

    // Division, drug damage, and death. Fate draws happen for every cell on
    // every step whether or not the outcome is possible, so runs that differ
    // only in drug exposure consume this stream identically.
    void update_cells(const SimConstants& consts, double dt) {
        const Bins bins = build_cell_bins();
        const std::size_t n0 = cells_.size();
        const double o2_span = tissue_.far_field_o2 - tissue_.hypoxia_threshold;
        for (std::size_t i = 0; i < n0; ++i) {
            CancerCell& c = cells_[i];
            const double o2 = o2_.sample(c.pos);
            const double ramp =
                o2_span > 0 ? std::clamp((o2 - tissue_.hypoxia_threshold) / o2_span, 0.0, 1.0)
                            : 0.0;

            const double u_div = cells_rng_.next_double();
            if (u_div < tissue_.division_rate * ramp * dt &&
                crowd_count(bins, c.pos, i) < tissue_.crowding_limit) {
                const double a = cells_rng_.uniform(0.0, 2.0 * std::numbers::pi);
                CancerCell child;
                child.pos = clamp_pos(c.pos + (tissue_.cell_spacing / 2.0) *
                                                  Vec2{std::cos(a), std::sin(a)});
                child.damage = c.damage;
                cells_.push_back(child);  // may invalidate c; re-index below
                ++created_;
            }

            CancerCell& cc = cells_[i];
            const double exposure = drug_active_ ? drug_.sample(cc.pos) : 0.0;
            cc.damage = std::max(
                0.0, cc.damage + consts.damage_rate * exposure * dt - consts.repair_rate * dt);

            const double u_death = cells_rng_.next_double();
            if (u_death < consts.drug_death_rate * cc.damage * dt) {
                cc.alive = false;
                ++died_drug_;
            }
        }
    }

    void move_workers(const DesignParams& design, const SimConstants& consts, double dt) {
        motility_.assign(workers_.size(), Vec2{});
        for (std::size_t w = 0; w < workers_.size(); ++w) {
            Worker& wk = workers_[w];
            const double tau = design.worker_persistence_time;
            const double p_turn = tau > 0 ? std::min(1.0, dt / tau) : 1.0;
            const double u_turn = workers_rng_.next_double();
            if (u_turn < p_turn) {
                const double a = workers_rng_.uniform(0.0, 2.0 * std::numbers::pi);
                wk.dir = {std::cos(a), std::sin(a)};
            }

            Vec2 g{grad_x_.sample(wk.pos), grad_y_.sample(wk.pos)};
            const double gn = norm(g);
            Vec2 ghat{};
            if (gn > 1e-12) {
                // Toward hypoxia while hauling cargo, toward oxygen (and the
                // supply boundary) while seeking.
                const double sign = wk.cargo >= 0 ? -1.0 : 1.0;
                ghat = (sign / gn) * g;
            }
            const double bias = wk.cargo >= 0 ? design.attached_migration_bias
                                              : design.unattached_migration_bias;
            motility_[w] = consts.worker_migration_speed *
                           (bias * ghat + (1.0 - bias) * wk.dir);
        }
        for (std::size_t w = 0; w < workers_.size(); ++w)
            workers_[w].pos = clamp_pos(workers_[w].pos + dt * motility_[w]);
    }

    // Unattached workers grab the nearest idle cargo inside the attachment
    // annulus; earlier workers (and lower cargo indices on ties) win.
    void attach_workers(const SimConstants& consts) {
        for (Worker& wk : workers_) {
            if (wk.cargo >= 0) continue;
            int best = -1;
            double best_d = consts.max_attachment_distance + 1.0;
            for (std::size_t c = 0; c < cargos_.size(); ++c) {
                if (cargos_[c].state != CargoState::idle) continue;
                const double d = norm(cargos_[c].pos - wk.pos);
                if (d >= consts.min_attachment_distance &&
                    d <= consts.max_attachment_distance && d < best_d) {
                    best = static_cast<int>(c);
                    best_d = d;
                }
            }
            if (best >= 0) {
                wk.cargo = best;
                cargos_[best].state = CargoState::attached;
            }
        }
    }

    void transport_cargo(const DesignParams& design, const SimConstants& consts, double dt) {
        for (Worker& wk : workers_) {
            if (wk.cargo < 0) continue;
            Cargo& cg = cargos_[wk.cargo];
            cg.pos = cg.pos + (consts.elastic_coefficient * dt) * (wk.pos - cg.pos);
            const double stretch = norm(wk.pos - cg.pos);
            if (stretch > consts.max_elastic_displacement) {
                cg.state = CargoState::idle;  // tether snapped
                wk.cargo = -1;
                continue;
            }
            if (o2_.sample(cg.pos) < design.cargo_release_o2_threshold) {
                deposit_drug(cg.pos);
                cg.state = CargoState::released;
                wk.cargo = -1;
                ++released_;
            }
        }
    }

    void deposit_drug(Vec2 p) {
        const int n = drug_.nx();
        const double h = drug_.spacing();
        const double r = tissue_.drug_deposit_radius;
        for (int j = 0; j < n; ++j) {
            for (int i = 0; i < n; ++i) {
                const double dx = (i + 0.5) * h - p.x;
                const double dy = (j + 0.5) * h - p.y;
                const double d2 = dx * dx + dy * dy;
                if (d2 < r * r)
                    drug_.at(i, j) += tissue_.drug_deposit_amount * (1.0 - d2 / (r * r));
            }
        }
        drug_active_ = true;
    }

    // Pairwise adhesion/repulsion inside each agent class. Interactions never
    // cross classes; the only worker-to-cell channel is the released drug.
    void apply_forces(const DesignParams& design, const SimConstants& consts, double dt) {
        cell_force_.assign(cells_.size(), Vec2{});
        const Bins bins = build_cell_bins();
        const double r_sum = 2.0 * tissue_.cell_radius;
        const double r_adh = consts.max_relative_adhesion_distance * r_sum;
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            const Vec2 pi = cells_[i].pos;
            for_each_neighbor(bins, pi, [&](std::size_t j) {
                if (j == i) return;
                cell_force_[i] = cell_force_[i] +
                                 pair_velocity(pi, cells_[j].pos, r_sum, r_adh,
                                               tissue_.cell_relative_repulsion,
                                               tissue_.cell_relative_adhesion);
            });
        }
        for (std::size_t i = 0; i < cells_.size(); ++i)
            cells_[i].pos = clamp_pos(cells_[i].pos + dt * cell_force_[i]);

        const double a_sum = 2.0 * tissue_.agent_radius;
        const double a_adh = consts.max_relative_adhesion_distance * a_sum;
        agent_force_.assign(workers_.size(), Vec2{});
        for (std::size_t i = 0; i < workers_.size(); ++i)
            for (std::size_t j = 0; j < workers_.size(); ++j)
                if (i != j)
                    agent_force_[i] = agent_force_[i] +
                                      pair_velocity(workers_[i].pos, workers_[j].pos, a_sum,
                                                    a_adh, design.worker_relative_repulsion,
                                                    design.worker_relative_adhesion);
        for (std::size_t i = 0; i < workers_.size(); ++i)
            workers_[i].pos = clamp_pos(workers_[i].pos + dt * agent_force_[i]);

        agent_force_.assign(cargos_.size(), Vec2{});
        for (std::size_t i = 0; i < cargos_.size(); ++i) {
            if (cargos_[i].state != CargoState::idle) continue;
            for (std::size_t j = 0; j < cargos_.size(); ++j)
                if (i != j && cargos_[j].state == CargoState::idle)
                    agent_force_[i] = agent_force_[i] +
                                      pair_velocity(cargos_[i].pos, cargos_[j].pos, a_sum,
                                                    a_adh, consts.cargo_relative_repulsion,
                                                    consts.cargo_relative_adhesion);
        }
        for (std::size_t i = 0; i < cargos_.size(); ++i)
            if (cargos_[i].state == CargoState::idle)
                cargos_[i].pos = clamp_pos(cargos_[i].pos + dt * agent_force_[i]);
    }

    Vec2 pair_velocity(Vec2 pi, Vec2 pj, double r_sum, double r_adh, double rel_rep,
                       double rel_adh) const {
        const Vec2 d = pi - pj;
        const double dist = norm(d);
        if (dist >= r_adh || dist < 1e-9) return {};
        Vec2 v{};
        const Vec2 dir = (1.0 / dist) * d;
        if (dist < r_sum) {
            const double s = 1.0 - dist / r_sum;
            v = v + (tissue_.repulsion_strength * rel_rep * s * s) * dir;
        }
        const double t = 1.0 - dist / r_adh;
        v = v - (tissue_.adhesion_strength * rel_adh * t * t) * dir;
        return v;
    }

    struct Bins {
        int nx = 0, ny = 0;
        double size = 1.0;
        std::vector<std::vector<std::uint32_t>> slots;
    };

    Bins build_cell_bins() const {
        Bins b;
        b.size = tissue_.grid_spacing;  // >= cell interaction radius
        b.nx = o2_.nx();
        b.ny = o2_.ny();
        b.slots.assign(static_cast<std::size_t>(b.nx) * b.ny, {});
        for (std::size_t i = 0; i < cells_.size(); ++i) {
            const int bi = o2_.node_i(cells_[i].pos.x);
            const int bj = o2_.node_j(cells_[i].pos.y);
            b.slots[static_cast<std::size_t>(bj) * b.nx + bi].push_back(
                static_cast<std::uint32_t>(i));
        }
        return b;
    }

    template <typename F>
    void for_each_neighbor(const Bins& b, Vec2 p, F&& f) const {
        const int bi = o2_.node_i(p.x);
        const int bj = o2_.node_j(p.y);
        for (int j = std::max(bj - 1, 0); j <= std::min(bj + 1, b.ny - 1); ++j)
            for (int i = std::max(bi - 1, 0); i <= std::min(bi + 1, b.nx - 1); ++i)
                for (std::uint32_t idx : b.slots[static_cast<std::size_t>(j) * b.nx + i])
                    f(idx);
    }

    int crowd_count(const Bins& b, Vec2 p, std::size_t self) const {
        int count = 0;
        const double r2 = tissue_.crowding_radius * tissue_.crowding_radius;
        for_each_neighbor(b, p, [&](std::size_t j) {
            if (j == self) return;
            const Vec2 d = cells_[j].pos - p;
            if (d.x * d.x + d.y * d.y <= r2) ++count;
        });
        return count;
    }

    Vec2 clamp_pos(Vec2 p) const {
        const double lo = tissue_.grid_spacing;
        const double hi = tissue_.domain_size - tissue_.grid_spacing;
        return {std::clamp(p.x, lo, hi), std::clamp(p.y, lo, hi)};
    }

    void compact_dead() {
        cells_.erase(std::remove_if(cells_.begin(), cells_.end(),
                                    [](const CancerCell& c) { return !c.alive; }),
                     cells_.end());
    }

    void check_finite() const {
        auto ok = [](double v) { return std::isfinite(v); };
        for (const CancerCell& c : cells_)
            if (!ok(c.pos.x) || !ok(c.pos.y) || !ok(c.damage))
                throw NumericalInstability("cancer cell state became non-finite");
        for (const Worker& w : workers_)
            if (!ok(w.pos.x) || !ok(w.pos.y))
                throw NumericalInstability("worker position became non-finite");
        for (const Cargo& c : cargos_)
            if (!ok(c.pos.x) || !ok(c.pos.y))
                throw NumericalInstability("cargo position became non-finite");
    }

    TissueConfig tissue_;
    double dt_diffusion_;
    RngStream cells_rng_;
    RngStream workers_rng_;

    ScalarField o2_, drug_, grad_x_, grad_y_, scratch_, uptake_decay_;
    std::vector<CancerCell> cells_;
    std::vector<Worker> workers_;
    std::vector<Cargo> cargos_;
    std::vector<Vec2> motility_, cell_force_, agent_force_;

    double clock_ = 0.0;
    bool drug_active_ = false;
    int released_ = 0;
    long long created_ = 0;
    long long died_drug_ = 0;
};

}  // namespace devo::biorobots

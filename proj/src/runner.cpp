// SPDX-License-Identifier: Apache-2.0
//
// sixdma - simulation and pose optimization for six-dimensional movable
// antenna (6DMA) base stations
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "sixdma/runner.hpp"

#include "sixdma/parallel.hpp"
#include "sixdma/version.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace sixdma
{

std::string scheme_name(Scheme s)
{
    switch (s)
    {
    case Scheme::fpa:
        return "fpa";
    case Scheme::rotation_only:
        return "rotation_only";
    case Scheme::fas_ma:
        return "fas_ma";
    case Scheme::sixdma:
        return "6dma";
    }
    throw std::logic_error("scheme_name: unreachable");
}

Scheme scheme_from_name(const std::string &name)
{
    if (name == "fpa")
        return Scheme::fpa;
    if (name == "rotation_only")
        return Scheme::rotation_only;
    if (name == "fas_ma")
        return Scheme::fas_ma;
    if (name == "6dma")
        return Scheme::sixdma;
    throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::string format_real(double value)
{
    char buf[40];
    for (int precision = 15; precision <= 17; ++precision)
    {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value)
            return buf;
    }
    return buf;
}

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (const char c : bytes)
    {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    return h;
}

DiscreteGrid default_run_grid()
{
    DiscreteGrid grid;
    grid.position_levels = {Vec3(1.5, 0.0, 0.0), Vec3(-0.75, 1.3, 0.0), Vec3(-0.75, -1.3, 0.0),
                            Vec3(0.0, 0.0, 1.5)};
    grid.alpha_levels = {0.0};
    grid.beta_levels = {0.5 * std::numbers::pi, 0.5 * std::numbers::pi + std::numbers::pi / 18.0};
    grid.gamma_levels.clear();
    for (int i = 0; i < 6; ++i)
        grid.gamma_levels.push_back(static_cast<double>(i) * std::numbers::pi / 3.0);
    return grid;
}

namespace
{

std::string format_reals(const std::vector<double> &values)
{
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i)
    {
        if (i != 0)
            out += ' ';
        out += format_real(values[i]);
    }
    return out;
}

std::string regime_name(Regime r)
{
    switch (r)
    {
    case Regime::continuous:
        return "continuous";
    case Regime::discrete:
        return "discrete";
    case Regime::csm:
        return "csm";
    }
    throw std::logic_error("regime_name: unreachable");
}

Regime regime_from_name(const std::string &name)
{
    if (name == "continuous")
        return Regime::continuous;
    if (name == "discrete")
        return Regime::discrete;
    if (name == "csm")
        return Regime::csm;
    throw std::invalid_argument("config key 'optimizer.regime': unknown regime '" + name + "'");
}

constexpr Scheme kCanonicalSchemeOrder[4] = {Scheme::fpa, Scheme::rotation_only, Scheme::fas_ma,
                                             Scheme::sixdma};

} // namespace

std::string default_config_text()
{
    const RunConfig d;
    std::ostringstream out;
    out << "# sixdma run configuration\n";
    out << "# Values shown are the built-in defaults; delete any line to keep its default.\n";
    out << "\n[scenario]\n";
    out << "region_radius_m = " << format_real(d.scenario.region_radius) << "\n";
    out << "bs_height_m = " << format_real(d.scenario.bs_height) << "\n";
    out << "# x y pairs, one per hotspot, semicolon separated\n";
    out << "hotspot_centers_xy_m = ";
    for (std::size_t i = 0; i < d.scenario.hotspots.size(); ++i)
    {
        if (i != 0)
            out << "; ";
        out << format_real(d.scenario.hotspots[i].center.x()) << ' '
            << format_real(d.scenario.hotspots[i].center.y());
    }
    out << "\n";
    out << "hotspot_radii_m =";
    for (const Hotspot &h : d.scenario.hotspots)
        out << ' ' << format_real(h.radius);
    out << "\n";
    out << "hotspot_weights =";
    for (const Hotspot &h : d.scenario.hotspots)
        out << ' ' << format_real(h.weight);
    out << "\n";
    out << "regular_weight = " << format_real(d.scenario.regular_weight) << "\n";
    out << "mean_user_count = " << format_real(d.scenario.mean_user_count) << "\n";
    out << "user_power_dbm = " << format_real(d.scenario.user_power_dbm) << "\n";
    out << "noise_power_dbm = " << format_real(d.scenario.noise_power_dbm) << "\n";
    out << "wavelength_m = " << format_real(d.scenario.wavelength) << "\n";
    out << "rician_factor = " << format_real(d.scenario.rician_factor) << "\n";
    out << "n_nlos = " << d.scenario.n_nlos << "\n";
    out << "nlos_angular_spread_deg = " << format_real(d.scenario.nlos_angular_spread_deg) << "\n";
    out << "pathloss_exponent_los = " << format_real(d.scenario.pathloss_exponent_los) << "\n";
    out << "pathloss_exponent_nlos = " << format_real(d.scenario.pathloss_exponent_nlos) << "\n";
    out << "\n[pattern]\n";
    out << "g_max_db = " << format_real(d.scenario.pattern.g_max_db) << "\n";
    out << "hpbw_deg = " << format_real(d.scenario.pattern.hpbw_deg) << "\n";
    out << "side_att_max_db = " << format_real(d.scenario.pattern.side_att_max_db) << "\n";
    out << "front_back_db = " << format_real(d.scenario.pattern.front_back_db) << "\n";
    out << "\n[site]\n";
    out << "n_surfaces = " << d.site.n_surfaces << "\n";
    out << "grid_rows = 2\n";
    out << "grid_cols = 2\n";
    out << "element_spacing_m = 0.05\n";
    out << "feasible_radius_m = " << format_real(d.site.feasible_radius) << "\n";
    out << "min_surface_distance_m = " << format_real(d.site.min_surface_distance) << "\n";
    out << "mount_radius_m = " << format_real(d.site.mount_radius) << "\n";
    out << "downtilt_deg = " << format_real(d.site.downtilt_deg) << "\n";
    out << "stack_spacing_m = " << format_real(d.site.stack_spacing) << "\n";
    out << "\n[optimizer]\n";
    out << "regime = " << regime_name(d.optimizer.regime) << "\n";
    out << "max_outer_iters = " << d.optimizer.max_outer_iters << "\n";
    out << "candidates_per_surface = " << d.optimizer.candidates_per_surface << "\n";
    out << "rotation_step_cap_rad = " << format_real(d.optimizer.rotation_step_cap) << "\n";
    out << "position_step_cap_m = " << format_real(d.optimizer.position_step_cap) << "\n";
    out << "mc_realizations = " << d.optimizer.mc_realizations << "\n";
    out << "improvement_tol = " << format_real(d.optimizer.improvement_tol) << "\n";
    out << "\n[grid]\n";
    out << "# x y z triples, semicolon separated\n";
    out << "position_levels_m = ";
    for (std::size_t i = 0; i < d.grid.position_levels.size(); ++i)
    {
        if (i != 0)
            out << "; ";
        const Vec3 &p = d.grid.position_levels[i];
        out << format_real(p.x()) << ' ' << format_real(p.y()) << ' ' << format_real(p.z());
    }
    out << "\n";
    out << "rotation_levels_alpha_rad = " << format_reals(d.grid.alpha_levels) << "\n";
    out << "rotation_levels_beta_rad = " << format_reals(d.grid.beta_levels) << "\n";
    out << "rotation_levels_gamma_rad = " << format_reals(d.grid.gamma_levels) << "\n";
    out << "csm_budget = " << d.csm_budget << "\n";
    out << "csm_measure_realizations = " << d.csm_measure_realizations << "\n";
    out << "\n[fas]\n";
    out << "aperture_wavelengths = " << format_real(d.fas.aperture_wavelengths) << "\n";
    out << "min_spacing_wavelengths = " << format_real(d.fas.min_spacing_wavelengths) << "\n";
    out << "passes = " << d.fas.passes << "\n";
    out << "\n[run]\n";
    out << "power_sweep_dbm = " << format_reals(d.power_sweep_dbm) << "\n";
    out << "schemes =";
    for (const Scheme s : d.schemes)
        out << ' ' << scheme_name(s);
    out << "\n";
    out << "eval_realizations = " << d.eval_realizations << "\n";
    out << "seed = " << d.seed << "\n";
    out << "workers = " << d.workers << "\n";
    return out.str();
}

RunConfig config_from_map(const ConfigMap &map)
{
    RunConfig cfg;

    cfg.scenario.region_radius = map.get_real("scenario.region_radius_m", cfg.scenario.region_radius);
    cfg.scenario.bs_height = map.get_real("scenario.bs_height_m", cfg.scenario.bs_height);
    {
        std::vector<std::vector<double>> default_centers;
        std::vector<double> default_radii, default_weights;
        for (const Hotspot &h : cfg.scenario.hotspots)
        {
            default_centers.push_back({h.center.x(), h.center.y()});
            default_radii.push_back(h.radius);
            default_weights.push_back(h.weight);
        }
        const auto centers = map.get_real_groups("scenario.hotspot_centers_xy_m", default_centers);
        const auto radii = map.get_reals("scenario.hotspot_radii_m", default_radii);
        const auto weights = map.get_reals("scenario.hotspot_weights", default_weights);
        if (radii.size() != centers.size())
            throw std::invalid_argument(
                "config key 'scenario.hotspot_radii_m': expected one radius per hotspot center");
        if (weights.size() != centers.size())
            throw std::invalid_argument(
                "config key 'scenario.hotspot_weights': expected one weight per hotspot center");
        cfg.scenario.hotspots.clear();
        for (std::size_t i = 0; i < centers.size(); ++i)
        {
            if (centers[i].size() != 2)
                throw std::invalid_argument(
                    "config key 'scenario.hotspot_centers_xy_m': each group must be an x y pair");
            cfg.scenario.hotspots.push_back(
                {Vec3(centers[i][0], centers[i][1], 0.0), radii[i], weights[i]});
        }
    }
    cfg.scenario.regular_weight = map.get_real("scenario.regular_weight", cfg.scenario.regular_weight);
    cfg.scenario.mean_user_count = map.get_real("scenario.mean_user_count", cfg.scenario.mean_user_count);
    cfg.scenario.user_power_dbm = map.get_real("scenario.user_power_dbm", cfg.scenario.user_power_dbm);
    cfg.scenario.noise_power_dbm = map.get_real("scenario.noise_power_dbm", cfg.scenario.noise_power_dbm);
    cfg.scenario.wavelength = map.get_real("scenario.wavelength_m", cfg.scenario.wavelength);
    cfg.scenario.rician_factor = map.get_real("scenario.rician_factor", cfg.scenario.rician_factor);
    cfg.scenario.n_nlos = static_cast<std::size_t>(map.get_uint("scenario.n_nlos", cfg.scenario.n_nlos));
    cfg.scenario.nlos_angular_spread_deg =
        map.get_real("scenario.nlos_angular_spread_deg", cfg.scenario.nlos_angular_spread_deg);
    cfg.scenario.pathloss_exponent_los =
        map.get_real("scenario.pathloss_exponent_los", cfg.scenario.pathloss_exponent_los);
    cfg.scenario.pathloss_exponent_nlos =
        map.get_real("scenario.pathloss_exponent_nlos", cfg.scenario.pathloss_exponent_nlos);

    cfg.scenario.pattern.g_max_db = map.get_real("pattern.g_max_db", cfg.scenario.pattern.g_max_db);
    cfg.scenario.pattern.hpbw_deg = map.get_real("pattern.hpbw_deg", cfg.scenario.pattern.hpbw_deg);
    cfg.scenario.pattern.side_att_max_db =
        map.get_real("pattern.side_att_max_db", cfg.scenario.pattern.side_att_max_db);
    cfg.scenario.pattern.front_back_db =
        map.get_real("pattern.front_back_db", cfg.scenario.pattern.front_back_db);

    cfg.site.n_surfaces = static_cast<std::size_t>(map.get_uint("site.n_surfaces", cfg.site.n_surfaces));
    {
        const auto rows = map.get_uint("site.grid_rows", 2);
        const auto cols = map.get_uint("site.grid_cols", 2);
        const auto spacing = map.get_real("site.element_spacing_m", 0.05);
        cfg.site.surface = planar_grid(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
                                       spacing);
    }
    cfg.site.feasible_radius = map.get_real("site.feasible_radius_m", cfg.site.feasible_radius);
    cfg.site.min_surface_distance =
        map.get_real("site.min_surface_distance_m", cfg.site.min_surface_distance);
    cfg.site.mount_radius = map.get_real("site.mount_radius_m", cfg.site.mount_radius);
    cfg.site.downtilt_deg = map.get_real("site.downtilt_deg", cfg.site.downtilt_deg);
    cfg.site.stack_spacing = map.get_real("site.stack_spacing_m", cfg.site.stack_spacing);

    cfg.optimizer.regime = regime_from_name(
        map.get_string("optimizer.regime", regime_name(cfg.optimizer.regime)));
    cfg.optimizer.max_outer_iters = static_cast<std::size_t>(
        map.get_uint("optimizer.max_outer_iters", cfg.optimizer.max_outer_iters));
    cfg.optimizer.candidates_per_surface = static_cast<std::size_t>(
        map.get_uint("optimizer.candidates_per_surface", cfg.optimizer.candidates_per_surface));
    cfg.optimizer.rotation_step_cap =
        map.get_real("optimizer.rotation_step_cap_rad", cfg.optimizer.rotation_step_cap);
    cfg.optimizer.position_step_cap =
        map.get_real("optimizer.position_step_cap_m", cfg.optimizer.position_step_cap);
    cfg.optimizer.mc_realizations = static_cast<std::size_t>(
        map.get_uint("optimizer.mc_realizations", cfg.optimizer.mc_realizations));
    cfg.optimizer.improvement_tol =
        map.get_real("optimizer.improvement_tol", cfg.optimizer.improvement_tol);

    {
        std::vector<std::vector<double>> default_positions;
        for (const Vec3 &p : cfg.grid.position_levels)
            default_positions.push_back({p.x(), p.y(), p.z()});
        const auto positions = map.get_real_groups("grid.position_levels_m", default_positions);
        cfg.grid.position_levels.clear();
        for (const auto &triple : positions)
        {
            if (triple.size() != 3)
                throw std::invalid_argument(
                    "config key 'grid.position_levels_m': each group must be an x y z triple");
            cfg.grid.position_levels.emplace_back(triple[0], triple[1], triple[2]);
        }
        cfg.grid.alpha_levels = map.get_reals("grid.rotation_levels_alpha_rad", cfg.grid.alpha_levels);
        cfg.grid.beta_levels = map.get_reals("grid.rotation_levels_beta_rad", cfg.grid.beta_levels);
        cfg.grid.gamma_levels = map.get_reals("grid.rotation_levels_gamma_rad", cfg.grid.gamma_levels);
    }
    cfg.csm_budget = static_cast<std::size_t>(map.get_uint("grid.csm_budget", cfg.csm_budget));
    cfg.csm_measure_realizations = static_cast<std::size_t>(
        map.get_uint("grid.csm_measure_realizations", cfg.csm_measure_realizations));

    cfg.fas.aperture_wavelengths = map.get_real("fas.aperture_wavelengths", cfg.fas.aperture_wavelengths);
    cfg.fas.min_spacing_wavelengths =
        map.get_real("fas.min_spacing_wavelengths", cfg.fas.min_spacing_wavelengths);
    cfg.fas.passes = static_cast<int>(map.get_int("fas.passes", cfg.fas.passes));

    cfg.power_sweep_dbm = map.get_reals("run.power_sweep_dbm", cfg.power_sweep_dbm);
    if (cfg.power_sweep_dbm.empty())
        throw std::invalid_argument("config key 'run.power_sweep_dbm': must list at least one power");
    {
        std::vector<std::string> default_names;
        for (const Scheme s : cfg.schemes)
            default_names.push_back(scheme_name(s));
        const auto names = map.get_words("run.schemes", default_names);
        cfg.schemes.clear();
        for (const std::string &n : names)
        {
            try
            {
                cfg.schemes.push_back(scheme_from_name(n));
            }
            catch (const std::invalid_argument &)
            {
                throw std::invalid_argument("config key 'run.schemes': unknown scheme '" + n + "'");
            }
        }
    }
    cfg.eval_realizations = static_cast<std::size_t>(
        map.get_uint("run.eval_realizations", cfg.eval_realizations));
    if (cfg.eval_realizations == 0)
        throw std::invalid_argument("config key 'run.eval_realizations': must be at least 1");
    cfg.seed = map.get_uint("run.seed", cfg.seed);
    cfg.workers = static_cast<int>(map.get_int("run.workers", cfg.workers));
    if (cfg.workers < 1)
        throw std::invalid_argument("config key 'run.workers': must be at least 1");

    return cfg;
}

LoadedConfig load_run_config(const std::string &path, const std::vector<std::string> &overrides)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();

    LoadedConfig loaded;
    loaded.config_text = buf.str();
    ConfigMap map = ConfigMap::parse_text(loaded.config_text, path);
    for (const std::string &ov : overrides)
    {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("override '" + ov + "' must be section.key=value");
        map.set(ov.substr(0, eq), ov.substr(eq + 1));
        loaded.overrides.push_back(ov);
    }
    loaded.run = config_from_map(map);
    map.require_all_consumed();
    return loaded;
}

namespace
{

std::string csv_header()
{
    return "scheme,power_dbm,mean_capacity_bps_hz,std_error,n_realizations,seed\n";
}

std::string csv_row(const std::string &scheme, double power, const CapacityEstimate &est,
                    std::uint64_t seed)
{
    std::ostringstream out;
    out << scheme << ',' << format_real(power) << ',' << format_real(est.mean) << ','
        << format_real(est.std_error) << ',' << est.n_realizations << ',' << seed << "\n";
    return out.str();
}

std::vector<double> evaluate_on_sets(const SiteGeometry &site, const ScenarioSpec &scen,
                                     const std::vector<UserRealization> &sets, int workers)
{
    std::vector<double> caps(sets.size());
    parallel_for(sets.size(), workers, [&](std::size_t i) {
        caps[i] = capacity_of_realization(site, scen, sets[i]);
    });
    return caps;
}

} // namespace

std::string run_evaluate(const RunConfig &cfg)
{
    validate(cfg.scenario);
    const SiteGeometry site = fpa_three_sector(cfg.site);
    const std::uint64_t eval_seed = derive_key(cfg.seed, stream_tag::eval);
    const auto sets = sample_user_sets(cfg.scenario, cfg.eval_realizations, eval_seed, cfg.workers);

    std::string csv = csv_header();
    for (const double power : cfg.power_sweep_dbm)
    {
        ScenarioSpec scen = cfg.scenario;
        scen.user_power_dbm = power;
        const CapacityEstimate est =
            summarize_capacities(evaluate_on_sets(site, scen, sets, cfg.workers));
        csv += csv_row("fpa", power, est, cfg.seed);
    }
    return csv;
}

CompareResult run_compare(const RunConfig &cfg)
{
    validate(cfg.scenario);
    {
        const std::set<Scheme> enabled(cfg.schemes.begin(), cfg.schemes.end());
        if (enabled.size() != 4)
            throw std::invalid_argument("run_compare: all four schemes must be enabled");
    }

    const SiteGeometry site = fpa_three_sector(cfg.site);
    const std::uint64_t eval_seed = derive_key(cfg.seed, stream_tag::eval);
    const std::uint64_t train_seed = derive_key(cfg.seed, stream_tag::train);
    const auto sets = sample_user_sets(cfg.scenario, cfg.eval_realizations, eval_seed, cfg.workers);

    CompareResult result;
    for (const double power : cfg.power_sweep_dbm)
    {
        ScenarioSpec scen = cfg.scenario;
        scen.user_power_dbm = power;
        for (const Scheme scheme : kCanonicalSchemeOrder)
        {
            SchemePoint point;
            point.scheme = scheme;
            point.power_dbm = power;
            switch (scheme)
            {
            case Scheme::fpa:
                point.capacities = evaluate_on_sets(site, scen, sets, cfg.workers);
                break;
            case Scheme::rotation_only:
            case Scheme::sixdma:
            {
                OptimizerConfig oc =
                    scheme == Scheme::rotation_only ? rotation_only_config(cfg.optimizer) : cfg.optimizer;
                oc.regime = Regime::continuous;
                oc.master_seed = train_seed;
                oc.workers = cfg.workers;
                const OptimizationTrace trace = alternating_optimize(site, scen, oc);
                SiteGeometry tuned = site;
                tuned.poses = trace.final_poses;
                point.capacities = evaluate_on_sets(tuned, scen, sets, cfg.workers);
                break;
            }
            case Scheme::fas_ma:
            {
                FasMaConfig fc = cfg.fas;
                fc.n_realizations = cfg.eval_realizations;
                fc.master_seed = eval_seed;
                fc.workers = cfg.workers;
                point.capacities = fas_ma_baseline(site, scen, fc);
                break;
            }
            }
            point.estimate = summarize_capacities(point.capacities);
            result.points.push_back(std::move(point));
        }
    }

    std::string csv = csv_header();
    for (const SchemePoint &p : result.points)
        csv += csv_row(scheme_name(p.scheme), p.power_dbm, p.estimate, cfg.seed);

    // Summary block: capacity ordering and paired gaps per power point.
    for (std::size_t pi = 0; pi < cfg.power_sweep_dbm.size(); ++pi)
    {
        const double power = cfg.power_sweep_dbm[pi];
        const SchemePoint *by_scheme[4];
        for (std::size_t si = 0; si < 4; ++si)
            by_scheme[si] = &result.points[pi * 4 + si];

        std::vector<std::size_t> order{0, 1, 2, 3};
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return by_scheme[a]->estimate.mean > by_scheme[b]->estimate.mean;
        });
        std::string ordering;
        for (std::size_t i = 0; i < order.size(); ++i)
        {
            if (i != 0)
                ordering += '>';
            ordering += scheme_name(by_scheme[order[i]]->scheme);
        }
        csv += "# power=" + format_real(power) + " ordering=" + ordering + "\n";

        const std::pair<Scheme, Scheme> pairs[] = {
            {Scheme::sixdma, Scheme::fpa},
            {Scheme::sixdma, Scheme::rotation_only},
            {Scheme::sixdma, Scheme::fas_ma},
            {Scheme::rotation_only, Scheme::fpa},
        };
        auto find_point = [&](Scheme s) -> const SchemePoint * {
            for (const SchemePoint *p : by_scheme)
                if (p->scheme == s)
                    return p;
            throw std::logic_error("run_compare: scheme missing from points");
        };
        for (const auto &[hi, lo] : pairs)
        {
            const SchemePoint *a = find_point(hi);
            const SchemePoint *b = find_point(lo);
            std::vector<double> diffs(a->capacities.size());
            for (std::size_t i = 0; i < diffs.size(); ++i)
                diffs[i] = a->capacities[i] - b->capacities[i];
            const CapacityEstimate d = summarize_capacities(diffs);
            csv += "# power=" + format_real(power) + " pair=" + scheme_name(hi) + "-" + scheme_name(lo) +
                   " gap=" + format_real(d.mean) + " paired_se=" + format_real(d.std_error) + "\n";
        }
    }
    result.csv = std::move(csv);
    return result;
}

OptimizeResult run_optimize(const RunConfig &cfg)
{
    validate(cfg.scenario);
    const SiteGeometry site = fpa_three_sector(cfg.site);

    OptimizerConfig oc = cfg.optimizer;
    oc.master_seed = cfg.seed;
    oc.workers = cfg.workers;

    OptimizeResult result;
    switch (oc.regime)
    {
    case Regime::continuous:
        result.trace = alternating_optimize(site, cfg.scenario, oc);
        break;
    case Regime::discrete:
        result.trace = relax_and_quantize(site, cfg.scenario, oc, cfg.grid);
        break;
    case Regime::csm:
    {
        CsmOptions options;
        options.measure_realizations = cfg.csm_measure_realizations;
        options.workers = cfg.workers;
        result.trace = csm_optimize(site, cfg.scenario, cfg.grid, cfg.csm_budget, cfg.seed, options);
        break;
    }
    }

    result.poses_csv = poses_to_csv(result.trace.final_poses);
    std::string tr = "iteration,objective\n";
    for (std::size_t i = 0; i < result.trace.objectives.size(); ++i)
        tr += std::to_string(i) + "," + format_real(result.trace.objectives[i]) + "\n";
    result.trace_csv = std::move(tr);
    return result;
}

std::string poses_to_csv(const std::vector<SurfacePose> &poses)
{
    std::string out = "index,qx,qy,qz,alpha,beta,gamma,frozen\n";
    for (std::size_t i = 0; i < poses.size(); ++i)
    {
        const SurfacePose &p = poses[i];
        out += std::to_string(i) + ',' + format_real(p.position.x()) + ',' + format_real(p.position.y()) +
               ',' + format_real(p.position.z()) + ',' + format_real(p.rotation.alpha) + ',' +
               format_real(p.rotation.beta) + ',' + format_real(p.rotation.gamma) + ',' +
               (p.frozen ? "1" : "0") + "\n";
    }
    return out;
}

std::vector<SurfacePose> poses_from_csv(const std::string &text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "index,qx,qy,qz,alpha,beta,gamma,frozen")
        throw std::invalid_argument("poses_from_csv: missing or malformed header");

    std::vector<SurfacePose> poses;
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ','))
            fields.push_back(field);
        if (fields.size() != 8)
            throw std::invalid_argument("poses_from_csv: expected 8 fields, got line '" + line + "'");
        if (std::strtoull(fields[0].c_str(), nullptr, 10) != poses.size())
            throw std::invalid_argument("poses_from_csv: surface indices must be consecutive from 0");
        SurfacePose p;
        p.position = Vec3(std::strtod(fields[1].c_str(), nullptr), std::strtod(fields[2].c_str(), nullptr),
                          std::strtod(fields[3].c_str(), nullptr));
        p.rotation = {std::strtod(fields[4].c_str(), nullptr), std::strtod(fields[5].c_str(), nullptr),
                      std::strtod(fields[6].c_str(), nullptr)};
        if (fields[7] != "0" && fields[7] != "1")
            throw std::invalid_argument("poses_from_csv: frozen flag must be 0 or 1");
        p.frozen = fields[7] == "1";
        poses.push_back(p);
    }
    return poses;
}

std::string manifest_text(const LoadedConfig &loaded, const std::string &schemes, double duration_s)
{
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(loaded.config_text)));
    std::string overrides;
    for (std::size_t i = 0; i < loaded.overrides.size(); ++i)
    {
        if (i != 0)
            overrides += ';';
        overrides += loaded.overrides[i];
    }
    if (overrides.empty())
        overrides = "none";

    std::ostringstream out;
    out << "config_hash = " << hash << "\n";
    out << "master_seed = " << loaded.run.seed << "\n";
    out << "schemes = " << schemes << "\n";
    out << "code_version = " << kVersionString << "\n";
    out << "workers = " << loaded.run.workers << "\n";
    char dur[32];
    std::snprintf(dur, sizeof(dur), "%.3f", duration_s);
    out << "duration_s = " << dur << "\n";
    out << "overrides = " << overrides << "\n";
    return out.str();
}

} // namespace sixdma

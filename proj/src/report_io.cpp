#include "abcstar/report_io.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace abcstar {

using nlohmann::json;

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

json tolerance_to_json(const ToleranceRegion& t) {
    return json{{"tau_minus", t.tau_minus}, {"tau_plus", t.tau_plus}, {"rho_star", t.rho_star}};
}

json config_to_json(const TestConfig& c) {
    return json{{"kind", test_kind_name(c.kind)},
                {"n", c.n},
                {"m", c.m},
                {"alpha", c.alpha},
                {"tolerance", tolerance_to_json(c.tolerance)},
                {"sigma_hat", c.sigma_hat},
                {"s2x", c.s2x},
                {"mu_hat_x", c.mu_hat_x},
                {"rho_hat_x", c.rho_hat_x}};
}

TestConfig config_from_json(const json& j) {
    TestConfig c;
    c.kind = test_kind_from_name(j.at("kind").get<std::string>());
    c.n = j.at("n").get<int>();
    c.m = j.at("m").get<int>();
    c.alpha = j.at("alpha").get<double>();
    const json& jt = j.at("tolerance");
    c.tolerance = {jt.at("tau_minus").get<double>(), jt.at("tau_plus").get<double>(),
                   jt.at("rho_star").get<double>()};
    c.sigma_hat = j.at("sigma_hat").get<double>();
    c.s2x = j.at("s2x").get<double>();
    c.mu_hat_x = j.at("mu_hat_x").get<double>();
    c.rho_hat_x = j.at("rho_hat_x").get<double>();
    return c;
}

} // namespace

void write_calibration_report(const CalibrationReport& r, const std::string& path) {
    json j;
    j["config"] = config_to_json(r.config);
    j["critical"] = {{"c_minus", r.critical.c_minus},
                     {"c_plus", r.critical.c_plus},
                     {"alpha", r.critical.alpha}};
    j["m"] = r.m;
    j["predicted_kl"] = r.predicted_kl;
    j["power_at_rho_star"] = r.power_at_rho_star;
    j["power_mode"] = r.power_mode;
    j["converged"] = r.converged;
    j["settings"] = {{"epsilon", r.settings.epsilon},
                     {"target_power", r.settings.target_power},
                     {"max_iterations", r.settings.max_iterations},
                     {"max_m_doublings", r.settings.max_m_doublings},
                     {"kl_quad_tol", r.settings.kl_quad_tol},
                     {"rho_support", {r.settings.rho_support.lo, r.settings.rho_support.hi}},
                     {"likelihood_mass_cut", r.settings.likelihood_mass_cut}};
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

CalibrationReport read_calibration_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    json j;
    in >> j;
    CalibrationReport r;
    r.config = config_from_json(j.at("config"));
    r.critical = {j.at("critical").at("c_minus").get<double>(),
                  j.at("critical").at("c_plus").get<double>(),
                  j.at("critical").at("alpha").get<double>()};
    r.m = j.at("m").get<int>();
    r.predicted_kl = j.at("predicted_kl").get<double>();
    r.power_at_rho_star = j.at("power_at_rho_star").get<double>();
    r.power_mode = j.at("power_mode").get<double>();
    r.converged = j.at("converged").get<bool>();
    const json& js = j.at("settings");
    r.settings.epsilon = js.at("epsilon").get<double>();
    r.settings.target_power = js.at("target_power").get<double>();
    r.settings.max_iterations = js.at("max_iterations").get<int>();
    r.settings.max_m_doublings = js.at("max_m_doublings").get<int>();
    r.settings.kl_quad_tol = js.at("kl_quad_tol").get<double>();
    r.settings.rho_support =
        Interval(js.at("rho_support")[0].get<double>(), js.at("rho_support")[1].get<double>());
    r.settings.likelihood_mass_cut = js.at("likelihood_mass_cut").get<double>();
    return r;
}

void write_draws_csv(const std::vector<Draw>& draws, int theta_dim, int z_dim,
                     const std::string& path, const std::string& echo) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << echo;
    out << "iteration";
    for (int d = 0; d < theta_dim; ++d) out << ",theta" << d;
    for (int k = 0; k < z_dim; ++k) out << ",z" << k;
    out << ",accepted\n";
    std::size_t i = 0;
    for (const auto& dr : draws) {
        out << i++;
        for (int d = 0; d < theta_dim; ++d) out << "," << format_double(dr.theta[d]);
        for (int k = 0; k < z_dim; ++k)
            out << ","
                << format_double(k < static_cast<int>(dr.z.size()) ? dr.z[k] : 0.0);
        out << "," << (dr.accepted ? 1 : 0) << "\n";
    }
}

void write_accuracy_report(const AccuracyReport& r, const std::string& path,
                           const std::string& echo) {
    json j;
    j["kl_divergence"] = r.kl_divergence;
    j["kl_floor"] = r.kl_floor;
    j["map_estimate"] = r.map_estimate;
    j["map_squared_error"] = r.map_squared_error;
    j["acceptance_rate"] = r.acceptance_rate;
    j["tp_lower_bound"] = r.tp_lower_bound;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& line : {echo}) out << line;
    out << j.dump(2) << "\n";
}

void write_series_csv(const std::vector<double>& values, const std::string& name,
                      const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << name << "\n";
    for (double v : values) out << format_double(v) << "\n";
}

std::vector<double> read_series_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty series file: " + path);
    std::vector<double> out;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        out.push_back(std::stod(line));
    }
    return out;
}

std::uint64_t binning_hash(Interval support0, Interval support1, int bins, int dim) {
    // FNV-1a over the exact binning parameters
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ULL;
    };
    auto mixd = [&](double d) {
        std::uint64_t bits;
        static_assert(sizeof(bits) == sizeof(d));
        __builtin_memcpy(&bits, &d, sizeof(bits));
        mix(bits);
    };
    mixd(support0.lo);
    mixd(support0.hi);
    mixd(support1.lo);
    mixd(support1.hi);
    mix(static_cast<std::uint64_t>(bins));
    mix(static_cast<std::uint64_t>(dim));
    return h;
}

void write_density_grid(const std::vector<double>& probs, Interval support0,
                        Interval support1, int bins, int dim, const std::string& path,
                        const std::string& echo) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << echo;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "# binning_hash = %" PRIu64 "\n",
                  binning_hash(support0, support1, bins, dim));
    out << buf;
    out << "# support0 = [" << format_double(support0.lo) << ", "
        << format_double(support0.hi) << "]\n";
    if (dim == 2)
        out << "# support1 = [" << format_double(support1.lo) << ", "
            << format_double(support1.hi) << "]\n";
    out << "# bins_per_dim = " << bins << "\n";
    out << "bin,probability\n";
    for (std::size_t b = 0; b < probs.size(); ++b)
        out << b << "," << format_double(probs[b]) << "\n";
}

} // namespace abcstar

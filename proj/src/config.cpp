#include "abcstar/config.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace abcstar {

using nlohmann::json;

namespace {

Interval interval_from(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2)
        throw config_error(std::string(what) + ": expected [lo, hi]");
    return Interval(j[0].get<double>(), j[1].get<double>());
}

} // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw config_error(std::string("config parse error: ") + e.what());
    }

    ExperimentConfig cfg;
    try {
        if (!j.contains("seed")) throw config_error("seed is mandatory");
        cfg.seed = j.at("seed").get<std::uint64_t>();
        cfg.threads = j.value("threads", 1);
        cfg.replicates = j.value("replicates", 1);
        cfg.output_dir = j.value("output_dir", std::string("out"));

        const json& jm = j.at("model");
        cfg.model.name = jm.at("name").get<std::string>();
        if (cfg.model.name != "normal" && cfg.model.name != "ma1")
            throw config_error("model.name must be 'normal' or 'ma1'");
        cfg.model.n = jm.value("n", cfg.model.name == "normal" ? 60 : 150);
        cfg.model.theta0 = jm.value("theta0", cfg.model.name == "normal"
                                                  ? std::vector<double>{1.0}
                                                  : std::vector<double>{0.1, 1.0});
        if (jm.contains("prior")) {
            const json& jp = jm.at("prior");
            if (jp.contains("sigma2"))
                cfg.model.prior_sigma2 = interval_from(jp.at("sigma2"), "prior.sigma2");
            if (jp.contains("a")) cfg.model.prior_a = interval_from(jp.at("a"), "prior.a");
        }
        const std::string scheme = jm.value("scheme", std::string("ignore_autocorr"));
        if (scheme == "ignore_autocorr")
            cfg.model.scheme = SubsetScheme::IgnoreAutocorr;
        else if (scheme == "thin_two_five")
            cfg.model.scheme = SubsetScheme::ThinTwoFive;
        else
            throw config_error("model.scheme must be ignore_autocorr or thin_two_five");
        cfg.model.normalize_pseudo_data = jm.value("normalize_pseudo_data", true);
        cfg.model.data_seed = jm.value("data_seed", 1);

        if (j.contains("tests")) {
            for (const auto& jt : j.at("tests")) {
                TestSeedConfig t;
                t.kind = test_kind_from_name(jt.at("kind").get<std::string>());
                t.alpha = jt.value("alpha", 0.01);
                cfg.tests.push_back(t);
            }
        }

        if (j.contains("calibration")) {
            const json& jc = j.at("calibration");
            cfg.calibration.epsilon = jc.value("epsilon", 1e-4);
            cfg.calibration.target_power = jc.value("target_power", 0.9);
            cfg.calibration.max_iterations = jc.value("max_iterations", 100);
            cfg.calibration.max_m_doublings = jc.value("max_m_doublings", 12);
            cfg.calibration.kl_quad_tol = jc.value("kl_quad_tol", 1e-10);
            cfg.calibration.likelihood_mass_cut = jc.value("likelihood_mass_cut", 1e-12);
        }

        if (j.contains("sampler")) {
            const json& js = j.at("sampler");
            cfg.sampler.algorithm = js.value("algorithm", std::string("rejection"));
            if (cfg.sampler.algorithm != "rejection" && cfg.sampler.algorithm != "mcmc" &&
                cfg.sampler.algorithm != "standard-abc")
                throw config_error("sampler.algorithm must be rejection, mcmc or standard-abc");
            cfg.sampler.iterations = js.value("iterations", 100000ULL);
            cfg.sampler.keep_rejected = js.value("keep_rejected", false);
            cfg.sampler.burn_in = js.value("burn_in", 5000);
            if (js.contains("tolerances"))
                for (const auto& jt : js.at("tolerances"))
                    cfg.sampler.tolerances.push_back(interval_from(jt, "sampler.tolerances"));
            if (js.contains("proposal_covariance"))
                cfg.sampler.proposal_covariance =
                    js.at("proposal_covariance").get<std::vector<double>>();
            if (js.contains("annealing")) {
                const json& ja = js.at("annealing");
                cfg.sampler.annealing.enabled = ja.value("enabled", true);
                cfg.sampler.annealing.start_inflation = ja.value("start_inflation", 2.0);
                cfg.sampler.annealing.stages = ja.value("stages", 50);
                cfg.sampler.annealing.decay = ja.value("decay", 0.9);
            }
        }

        if (j.contains("oracle")) {
            const json& jo = j.at("oracle");
            cfg.oracle.iterations = jo.value("iterations", 200000ULL);
            cfg.oracle.chains = jo.value("chains", 6);
            cfg.oracle.burn_in = jo.value("burn_in", 2000);
        }
    } catch (const json::exception& e) {
        throw config_error(std::string("config error: ") + e.what());
    }
    return cfg;
}

std::string config_echo(const ExperimentConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << "# seed = " << c.seed << "\n";
    os << "# threads = " << c.threads << "\n";
    os << "# replicates = " << c.replicates << "\n";
    os << "# model.name = " << c.model.name << "\n";
    os << "# model.n = " << c.model.n << "\n";
    os << "# model.theta0 =";
    for (double v : c.model.theta0) os << " " << v;
    os << "\n";
    os << "# model.data_seed = " << c.model.data_seed << "\n";
    if (c.model.name == "normal") {
        os << "# model.prior.sigma2 = [" << c.model.prior_sigma2.lo << ", "
           << c.model.prior_sigma2.hi << "]\n";
        os << "# model.normalize_pseudo_data = " << c.model.normalize_pseudo_data << "\n";
    } else {
        os << "# model.prior.a = [" << c.model.prior_a.lo << ", " << c.model.prior_a.hi
           << "]\n";
        os << "# model.prior.sigma2 = [" << c.model.prior_sigma2.lo << ", "
           << c.model.prior_sigma2.hi << "]\n";
        os << "# model.scheme = "
           << (c.model.scheme == SubsetScheme::IgnoreAutocorr ? "ignore_autocorr"
                                                              : "thin_two_five")
           << "\n";
    }
    for (const auto& t : c.tests)
        os << "# test = " << test_kind_name(t.kind) << " alpha " << t.alpha << "\n";
    os << "# calibration.target_power = " << c.calibration.target_power << "\n";
    os << "# calibration.epsilon = " << c.calibration.epsilon << "\n";
    os << "# sampler.algorithm = " << c.sampler.algorithm << "\n";
    os << "# sampler.iterations = " << c.sampler.iterations << "\n";
    if (c.sampler.algorithm == "mcmc") {
        os << "# sampler.burn_in = " << c.sampler.burn_in << "\n";
        os << "# sampler.annealing.start_inflation = " << c.sampler.annealing.start_inflation
           << "\n";
    }
    return os.str();
}

} // namespace abcstar

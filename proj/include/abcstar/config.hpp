#pragma once

#include "abcstar/calibration.hpp"
#include "abcstar/interval.hpp"
#include "abcstar/models.hpp"
#include "abcstar/samplers.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace abcstar {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelConfig {
    std::string name;                 // "normal" | "ma1"
    int n = 60;
    std::vector<double> theta0;       // normal: {sigma2}; ma1: {a, sigma2}
    Interval prior_sigma2{0.2, 4.0};
    Interval prior_a{-0.43, 0.43};    // ma1 only
    SubsetScheme scheme = SubsetScheme::IgnoreAutocorr;
    bool normalize_pseudo_data = true; // normal: rescale so sigma2_hat = theta0
    std::uint64_t data_seed = 1;
};

struct SamplerConfig {
    std::string algorithm = "rejection"; // "rejection" | "mcmc" | "standard-abc"
    std::uint64_t iterations = 100000;
    bool keep_rejected = false;
    int burn_in = 5000;
    std::vector<Interval> tolerances; // standard-abc
    std::vector<double> proposal_covariance; // row-major, mcmc
    AnnealingSettings annealing;
};

struct OracleConfig {
    std::uint64_t iterations = 200000;
    int chains = 6;
    int burn_in = 2000;
};

struct TestSeedConfig {
    TestKind kind = TestKind::ChiSqDispersion;
    double alpha = 0.01;
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    int threads = 1;
    int replicates = 1;
    std::string output_dir = "out";
    ModelConfig model;
    std::vector<TestSeedConfig> tests;
    CalibrationSettings calibration; // rho_support filled from the model
    SamplerConfig sampler;
    OracleConfig oracle;
};

/// Parse an experiment configuration from a JSON file. Throws
/// config_error with a diagnostic on schema violations (the CLI maps
/// this to exit code 2).
ExperimentConfig load_config(const std::string& path);

/// Resolved configuration as "# key = value" lines echoed into every
/// output file.
std::string config_echo(const ExperimentConfig& config);

} // namespace abcstar

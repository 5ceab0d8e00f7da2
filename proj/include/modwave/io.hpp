#pragma once

// File formats. Signals: CSV `m,re,im`. Subspaces: CSV `m,k,re,im` holding b_m(k).
// Complex values inside JSON are {"re": .., "im": ..} objects; readers also take [re, im].

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "modwave/certificate.hpp"
#include "modwave/experiments.hpp"
#include "modwave/model.hpp"
#include "modwave/solver.hpp"

namespace modwave {

using json = nlohmann::json;

/// Malformed or unreadable input; the message names the file or field.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

json complex_to_json(cplx z);
cplx complex_from_json(const json& j, const std::string& field);

/// Text round-trip exact formatting (%.17g).
std::string format_double(double v);

void write_signal_csv(const std::filesystem::path& path, const CVec& x);
CVec read_signal_csv(const std::filesystem::path& path);

void write_subspace_csv(const std::filesystem::path& path, const Subspace& subspace);
Subspace read_subspace_csv(const std::filesystem::path& path);

json truth_to_json(const GroundTruth& truth, int M, int K, std::uint64_t seed);
/// Fills `truth`; returns the stored M and K through the out parameters.
GroundTruth truth_from_json(const json& j, int* M = nullptr, int* K = nullptr);

json solution_to_json(const SdpSolution& sol);
/// Reads the fields written by solution_to_json; X_hat, u_hat and T_hat stay empty.
SdpSolution solution_from_json(const json& j);

json certificate_report_to_json(const CertificateReport& rep);

json sweep_config_to_json(const SweepConfig& config);
SweepConfig sweep_config_from_json(const json& j);

json fit_to_json(const ScalingFit& fit);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace modwave

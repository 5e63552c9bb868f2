// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "adcalloc/network.hpp"
#include "adcalloc/power.hpp"
#include "adcalloc/se.hpp"

namespace adcalloc {

enum class AllocationMethod { Equal, MinPilotDist, MaxProdSinr, MaxMinFair, PowerConstrainedMaxProd };
enum class QuantizationMode { Additive, Exact };

const char* to_string(AllocationMethod m);
AllocationMethod allocation_method_from_string(const std::string& s);
const char* to_string(QuantizationMode m);
QuantizationMode quantization_mode_from_string(const std::string& s);

/// One experiment axis: channel case x allocation method x combiner x
/// quantization mode, written as "CellFree:MaxProdSinr:RZF:additive".
struct Scenario {
    ChannelCase chan_case = ChannelCase::CoCorrI;
    AllocationMethod method = AllocationMethod::Equal;
    CombinerKind combiner = CombinerKind::MR;
    QuantizationMode mode = QuantizationMode::Additive;

    std::string label() const;  ///< filesystem-safe, dash separated
};

Scenario parse_scenario(const std::string& spec);

/// Parsed from flat "section.key = value" text. Unknown keys are rejected.
struct CampaignConfig {
    NetworkConfig network;
    std::vector<Scenario> scenarios;
    int n_drops = 200;
    int n_trials = 10000;          ///< Monte-Carlo trials per drop (MC/exact paths)
    std::uint64_t master_seed = 1;
    double zeta = 1.6;
    int b_tot = 0;                 ///< 0 means 3M
    PowerModel power;
    double gamma_pc = 10.0;                ///< power cap [W] (power-constrained method)
    std::vector<double> gamma_pc_sweep;    ///< optional sweep grid; empty = {gamma_pc}
    std::string output_dir = "out";
    int workers = 0;               ///< 0 means hardware concurrency

    int bit_budget() const { return b_tot > 0 ? b_tot : 3 * network.M; }

    static CampaignConfig from_file(const std::string& path);
    static CampaignConfig from_text(const std::string& text);
    std::string canonical_text() const;   ///< sorted key=value form used for hashing
    std::uint64_t config_hash() const;
    void validate() const;
};

struct CdfTable {
    Eigen::VectorXd values;  ///< sorted samples
    Eigen::VectorXd cdf;     ///< F(x_(i)) = i/n
};

CdfTable aggregate_cdf(std::vector<double> samples);

/// Result of one network drop under one scenario, kept in memory until the
/// single-writer output pass so files are independent of worker scheduling.
struct DropResult {
    bool failed = false;
    std::string error;
    std::uint64_t drop_seed = 0;
    Eigen::VectorXd bits;
    Eigen::VectorXd se;
    Eigen::VectorXd sinr;
    Eigen::VectorXd data_energy;
    bool stderr_flagged = false;
    /// Power-constrained scenarios: one row (gamma_pc, se_sum, p_txd_adc, ee) per sweep point.
    std::vector<std::array<double, 4>> ee_rows;
};

DropResult run_drop(const CampaignConfig& cfg, const Scenario& sc, int drop_index);

struct CampaignSummary {
    int drops_attempted = 0;
    int drops_failed = 0;
    std::vector<std::string> files;
};

/// Runs all (filtered) scenarios, distributing drops across workers with
/// deterministic per-drop seeds, and writes CSVs, CDF tables, a column schema,
/// and a manifest into out_dir. Aborts if more than 5% of drops fail.
CampaignSummary run_campaign(const CampaignConfig& cfg, const std::string& out_dir,
                             int workers = 0,
                             const std::vector<std::string>& scenario_filter = {});

} // namespace adcalloc

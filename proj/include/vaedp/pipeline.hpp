//
// Copyright 2026 The vaedp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef VAEDP_PIPELINE_HPP_
#define VAEDP_PIPELINE_HPP_

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "vaedp/attack.hpp"
#include "vaedp/dataset.hpp"
#include "vaedp/dp.hpp"
#include "vaedp/tradeoff.hpp"
#include "vaedp/vae.hpp"

namespace vaedp {

enum class DpSettingKind { kBaseline, kCdp, kLdpFull, kLdpTrain, kVaeLdp };
DpSettingKind dp_setting_from_name(const std::string& name);
const char* dp_setting_name(DpSettingKind kind);

enum class LdpMechanism { kPixelize, kLaplaceFeature };

struct DpSetting {
  DpSettingKind kind = DpSettingKind::kBaseline;
  // cdp
  bool clip_auto = true;
  double clipping_norm = 0.0;        // used when !clip_auto
  std::size_t heuristic_epochs = 10; // preliminary non-private run length
  // ldp
  LdpMechanism mechanism = LdpMechanism::kPixelize;
  double pixel_neighborhood = 0.0;   // 0 = sqrt(rows*cols) of the record shape
  std::size_t pixel_cell_size = 1;
  double pixel_value_range = 255.0;
};

struct DatasetSource {
  enum class Kind { kBlobImages, kToySeries, kCsv, kContainer };
  Kind kind = Kind::kBlobImages;
  BlobImagesSpec blob;
  ToySeriesSpec series;
  std::string path;
  std::vector<std::size_t> record_shape;  // optional CSV record shape
};

struct ExperimentConfig {
  DatasetSource dataset;
  double train_frac = 0.5, val_frac = 0.2, test_frac = 0.3;
  DpSetting dp;
  std::vector<double> sweep;  // z (cdp) | eps_i (ldp) | sigma_b (vae_ldp)
  VaeConfig model;            // data_dim is filled from the dataset
  VaeTrainConfig train;
  ClassifierConfig classifier;
  std::size_t attack_n_per_side = 100;
  AttackConfig attack;
  std::uint64_t seed = 42;
  std::string out_dir = "out";
  nlohmann::json echo;  // the parsed config, echoed into the report
};

// Parses and validates the single-JSON-file experiment config. Missing keys
// take the documented defaults; invalid values throw ConfigError.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

Dataset build_dataset(const DatasetSource& source, std::uint64_t seed);

// Per-feature max absolute value over the training split; the Laplace
// feature mechanism's sensitivities come from training data only.
std::vector<double> feature_sensitivities(const Dataset& train);

// Applies the configured local randomizer to every record with budget eps_i,
// using a per-record stream derived from `rng` by record id.
Dataset perturb_dataset_ldp(const Dataset& data, const DpSetting& dp, double eps_i,
                            const std::vector<double>& sensitivities, Rng rng,
                            LocalAlgorithmLedger* ledger = nullptr);

// One line of the trade-off report. NaN marks an absent value; +inf marks a
// non-private (z = 0) epsilon.
struct SweepRow {
  std::string setting;
  double privacy_param = 0.0;
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
  double acc = std::numeric_limits<double>::quiet_NaN();
  double ap = std::numeric_limits<double>::quiet_NaN();
  double phi_score = std::numeric_limits<double>::quiet_NaN();
  double train_test_gap = std::numeric_limits<double>::quiet_NaN();
  bool posterior_collapse = false;
  nlohmann::json accountant;  // null unless cdp
  nlohmann::json ledger;      // null unless ldp
  std::string error;          // non-empty when the point failed
};

struct TradeoffReport {
  nlohmann::json config_echo;
  std::uint64_t seed = 0;
  double baseline_acc = std::numeric_limits<double>::quiet_NaN();
  double baseline_ap = std::numeric_limits<double>::quiet_NaN();
  double baseline_gap = std::numeric_limits<double>::quiet_NaN();
  // Accuracy of a classifier trained directly on raw training records,
  // recorded for reference; phi uses baseline_acc (generated data).
  double nongenerated_acc = std::numeric_limits<double>::quiet_NaN();
  std::vector<SweepRow> rows;

  nlohmann::json to_json() const;
  static TradeoffReport from_json(const nlohmann::json& j);
};

// Baseline once, then one full pipeline per sweep value. A failing sweep
// point is recorded and the sweep continues.
TradeoffReport run_sweep(const ExperimentConfig& config);

// report.json, summary.csv and the three SVG line charts.
void emit_report(const TradeoffReport& report, const std::string& out_dir);
TradeoffReport load_report(const std::string& path);

std::string report_summary_csv(const TradeoffReport& report);

}  // namespace vaedp

#endif  // VAEDP_PIPELINE_HPP_

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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "vaedp/accountant.hpp"
#include "vaedp/attack.hpp"
#include "vaedp/dataset.hpp"
#include "vaedp/error.hpp"
#include "vaedp/pipeline.hpp"
#include "vaedp/vae.hpp"

namespace {

using nlohmann::json;
using namespace vaedp;

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

ExperimentConfig load_config(const std::string& path, std::int64_t seed_override,
                             const std::string& out_override) {
  ExperimentConfig cfg = load_experiment_config(path);
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  if (!out_override.empty()) cfg.out_dir = out_override;
  return cfg;
}

int cmd_synth(const ExperimentConfig& cfg) {
  const Dataset data = build_dataset(cfg.dataset, cfg.seed);
  std::filesystem::create_directories(cfg.out_dir);
  const std::string base = cfg.out_dir + "/dataset";
  save_dataset_container(data, base + ".bin");
  save_dataset_csv(data, base + ".csv");
  std::cout << "wrote " << base << ".bin and " << base << ".csv (" << data.size()
            << " records, " << data.dim() << " features, " << data.class_count
            << " classes)\n";
  return 0;
}

int cmd_train(const ExperimentConfig& cfg) {
  const Dataset data = build_dataset(cfg.dataset, cfg.seed);
  SplitResult split =
      split_dataset(data, cfg.train_frac, cfg.val_frac, cfg.test_frac, cfg.seed);
  Rng point_rng = Rng(cfg.seed).split("point");

  // LDP settings train on locally perturbed data (first sweep value).
  LocalAlgorithmLedger ledger;
  if (cfg.dp.kind == DpSettingKind::kLdpFull ||
      cfg.dp.kind == DpSettingKind::kLdpTrain) {
    if (cfg.sweep.empty()) throw ConfigError("LDP training needs a sweep value");
    const double eps_i = cfg.sweep.front();
    const std::vector<double> sens = feature_sensitivities(split.train);
    Rng prng = point_rng.split("perturb");
    split.train = perturb_dataset_ldp(split.train, cfg.dp, eps_i, sens,
                                      prng.split("train"), &ledger);
    if (cfg.dp.kind == DpSettingKind::kLdpFull) {
      split.val = perturb_dataset_ldp(split.val, cfg.dp, eps_i, sens,
                                      prng.split("val"), &ledger);
    }
  }

  VaeConfig model_cfg = cfg.model;
  model_cfg.data_dim = split.train.dim();
  if (model_cfg.weights.cls > 0.0) model_cfg.class_count = split.train.class_count;
  if (cfg.dp.kind == DpSettingKind::kVaeLdp) {
    model_cfg.mode = VaeMode::kVaeLdp;
    model_cfg.noise_bound = cfg.sweep.empty() ? 1.0 : cfg.sweep.front();
  }
  Rng model_rng = point_rng.split("model");
  VaeModel model = make_vae(model_cfg, model_rng);

  VaeTrainConfig train_cfg = cfg.train;
  std::unique_ptr<RdpAccountant> accountant;
  if (cfg.dp.kind == DpSettingKind::kCdp && !cfg.sweep.empty() &&
      cfg.sweep.front() > 0.0) {
    const double z = cfg.sweep.front();
    double clip = cfg.dp.clipping_norm;
    if (cfg.dp.clip_auto) {
      VaeModel pre_model = model;
      VaeTrainConfig pre_cfg = cfg.train;
      pre_cfg.epochs = cfg.dp.heuristic_epochs;
      pre_cfg.dp.reset();
      pre_cfg.record_preclip_norms = true;
      Rng pre_rng = point_rng.split("heuristic");
      const VaeTrainLog pre_log =
          train_vae(pre_model, split.train, split.val, pre_cfg, nullptr, pre_rng);
      clip = clipping_norm_heuristic(pre_log.preclip_norms);
    }
    train_cfg.dp = DpTrainConfig{clip, z};
    const std::size_t batch =
        std::max<std::size_t>(1, std::min(cfg.train.batch_size, split.train.size()));
    accountant = std::make_unique<RdpAccountant>(
        static_cast<double>(batch) / static_cast<double>(split.train.size()), z);
  }

  Rng train_rng = point_rng.split("train");
  const VaeTrainLog log =
      train_vae(model, split.train, split.val, train_cfg, accountant.get(), train_rng);

  std::filesystem::create_directories(cfg.out_dir);
  save_vae(model, cfg.out_dir + "/model.ckpt");

  json jlog;
  jlog["steps"] = log.steps;
  jlog["posterior_collapse"] = log.posterior_collapse;
  json epochs = json::array();
  for (const VaeEpochStats& e : log.epochs) {
    epochs.push_back({{"train_loss", e.train_loss},
                      {"train_rec", e.train_rec},
                      {"train_kl", e.train_kl},
                      {"val_loss", e.val_loss},
                      {"val_rec", e.val_rec}});
  }
  jlog["epochs"] = epochs;
  if (accountant) {
    jlog["accountant"] =
        json::parse(accountant->export_json(1.0 / static_cast<double>(split.train.size())));
  }
  if (!ledger.entries().empty()) {
    jlog["ledger"] = json::parse(ledger.to_json());
  }
  write_text(cfg.out_dir + "/training_log.json", jlog.dump(2) + "\n");
  std::cout << "wrote " << cfg.out_dir << "/model.ckpt after " << log.steps
            << " steps\n";
  return 0;
}

int cmd_attack(const ExperimentConfig& cfg, const std::string& model_path) {
  const Dataset data = build_dataset(cfg.dataset, cfg.seed);
  const SplitResult split =
      split_dataset(data, cfg.train_frac, cfg.val_frac, cfg.test_frac, cfg.seed);
  const VaeModel model = load_vae(model_path);

  AttackConfig atk = cfg.attack;
  if (split.train.record_shape.size() == 2) {
    atk.img_rows = split.train.record_shape[0];
    atk.img_cols = split.train.record_shape[1];
  }
  Rng atk_rng = Rng(cfg.seed).split("point").split("attack");
  const AttackResult result = run_attack(model, split.train, split.test,
                                         cfg.attack_n_per_side, atk, atk_rng);

  std::filesystem::create_directories(cfg.out_dir);
  write_text(cfg.out_dir + "/attack_scores.csv", score_table_csv(result));
  json j;
  j["average_precision"] = result.average_precision;
  j["n_per_side"] = result.n_per_side;
  j["n_clamped"] = result.n_clamped;
  j["distance"] = distance_name(atk.distance);
  write_text(cfg.out_dir + "/attack.json", j.dump(2) + "\n");
  std::cout << "MI AP = " << result.average_precision << " over "
            << result.table.size() << " records\n";
  return 0;
}

int cmd_accountant(double q, double z, std::uint64_t steps, double delta) {
  RdpAccountant acct(q, z);
  acct.accumulate_step(steps);
  std::cout << acct.export_json(delta) << "\n";
  return 0;
}

int cmd_sweep(const ExperimentConfig& cfg) {
  const TradeoffReport report = run_sweep(cfg);
  emit_report(report, cfg.out_dir);
  std::size_t failed = 0;
  for (const SweepRow& r : report.rows) {
    if (!r.error.empty()) {
      ++failed;
      std::cerr << "note: sweep point " << r.privacy_param << " failed: " << r.error
                << "\n";
    }
  }
  std::cout << "wrote " << cfg.out_dir << "/report.json with " << report.rows.size()
            << " sweep rows, " << failed << " failed (baseline acc="
            << report.baseline_acc << ", ap=" << report.baseline_ap << ")\n";
  return 0;
}

int cmd_report(const std::string& in_path, const std::string& out_dir) {
  const TradeoffReport report = load_report(in_path);
  emit_report(report, out_dir);
  std::cout << "re-emitted report into " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private VAE benchmark"};
  app.require_subcommand(1);

  std::string config_path, out_override, model_path, report_in;
  std::int64_t seed_override = -1;

  auto add_common = [&](CLI::App* sub, bool need_config) {
    if (need_config) {
      sub->add_option("-c,--config", config_path, "experiment config JSON")
          ->required();
    }
    sub->add_option("--seed", seed_override, "seed override");
    sub->add_option("--out", out_override, "output directory override");
  };

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset file");
  add_common(synth, true);
  CLI::App* train = app.add_subcommand("train", "train one VAE and checkpoint it");
  add_common(train, true);
  CLI::App* attack = app.add_subcommand("attack", "score a trained model with the MI attack");
  add_common(attack, true);
  attack->add_option("-m,--model", model_path, "model checkpoint")->required();
  CLI::App* sweep = app.add_subcommand("sweep", "run the full experiment sweep");
  add_common(sweep, true);
  CLI::App* acct = app.add_subcommand("accountant", "standalone (q,z,T,delta) -> eps query");
  double q = 1.0, z = 1.0, delta = 1e-5;
  std::uint64_t steps = 1;
  acct->add_option("--q", q, "sampling rate")->required();
  acct->add_option("--z", z, "noise multiplier")->required();
  acct->add_option("--steps", steps, "composed steps T")->required();
  acct->add_option("--delta", delta, "target delta")->required();
  CLI::App* report = app.add_subcommand("report", "re-emit plots from report.json");
  report->add_option("-i,--in", report_in, "report.json path")->required();
  report->add_option("--out", out_override, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(load_config(config_path, seed_override, out_override));
    if (train->parsed()) return cmd_train(load_config(config_path, seed_override, out_override));
    if (attack->parsed()) {
      return cmd_attack(load_config(config_path, seed_override, out_override), model_path);
    }
    if (sweep->parsed()) return cmd_sweep(load_config(config_path, seed_override, out_override));
    if (acct->parsed()) return cmd_accountant(q, z, steps, delta);
    if (report->parsed()) return cmd_report(report_in, out_override);
  } catch (const Error& e) {
    nlohmann::json err{{"error", e.kind()}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", "internal"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 1;
}

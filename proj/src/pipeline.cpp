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

#include "vaedp/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>

#include "vaedp/accountant.hpp"
#include "vaedp/error.hpp"

namespace vaedp {
namespace {

using nlohmann::json;

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[48];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// NaN -> null, inf -> "inf" so the report stays valid JSON and round-trips.
json num_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return "inf";
  return v;
}

double num_from_json(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  if (j.is_string()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

std::string csv_cell(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return "inf";
  return fmt(v);
}

}  // namespace

DpSettingKind dp_setting_from_name(const std::string& name) {
  if (name == "baseline") return DpSettingKind::kBaseline;
  if (name == "cdp") return DpSettingKind::kCdp;
  if (name == "ldp_full") return DpSettingKind::kLdpFull;
  if (name == "ldp_train") return DpSettingKind::kLdpTrain;
  if (name == "vae_ldp") return DpSettingKind::kVaeLdp;
  throw ConfigError("unknown dp setting: " + name);
}

const char* dp_setting_name(DpSettingKind kind) {
  switch (kind) {
    case DpSettingKind::kBaseline: return "baseline";
    case DpSettingKind::kCdp: return "cdp";
    case DpSettingKind::kLdpFull: return "ldp_full";
    case DpSettingKind::kLdpTrain: return "ldp_train";
    case DpSettingKind::kVaeLdp: return "vae_ldp";
  }
  return "baseline";
}

ExperimentConfig parse_experiment_config(const json& j) {
  ExperimentConfig cfg;
  cfg.echo = j;

  // dataset
  const json& jd = j.at("dataset");
  if (jd.contains("synthetic")) {
    const json& js = jd.at("synthetic");
    const std::string kind = js.value("kind", "blob-images");
    if (kind == "blob-images") {
      cfg.dataset.kind = DatasetSource::Kind::kBlobImages;
      cfg.dataset.blob.classes = js.value("classes", 4);
      cfg.dataset.blob.records = js.value("records", 400);
      cfg.dataset.blob.rows = js.value("rows", 16);
      cfg.dataset.blob.cols = js.value("cols", 16);
      cfg.dataset.blob.noise = js.value("noise", 0.15);
    } else if (kind == "toy-series") {
      cfg.dataset.kind = DatasetSource::Kind::kToySeries;
      cfg.dataset.series.classes = js.value("classes", 3);
      cfg.dataset.series.records = js.value("records", 300);
      cfg.dataset.series.timesteps = js.value("timesteps", 32);
      cfg.dataset.series.channels = js.value("channels", 2);
      cfg.dataset.series.noise = js.value("noise", 0.1);
    } else {
      throw ConfigError("unknown synthetic dataset kind: " + kind);
    }
  } else if (jd.contains("path")) {
    cfg.dataset.path = jd.at("path").get<std::string>();
    const std::string p = cfg.dataset.path;
    cfg.dataset.kind = p.size() > 4 && p.substr(p.size() - 4) == ".csv"
                           ? DatasetSource::Kind::kCsv
                           : DatasetSource::Kind::kContainer;
    if (jd.contains("record_shape")) {
      cfg.dataset.record_shape = jd.at("record_shape").get<std::vector<std::size_t>>();
    }
  } else {
    throw ConfigError("dataset needs either 'synthetic' or 'path'");
  }

  if (j.contains("split")) {
    cfg.train_frac = j.at("split").value("train", 0.5);
    cfg.val_frac = j.at("split").value("val", 0.2);
    cfg.test_frac = j.at("split").value("test", 0.3);
  }
  if (!(cfg.train_frac > 0 && cfg.val_frac > 0 && cfg.test_frac > 0) ||
      std::fabs(cfg.train_frac + cfg.val_frac + cfg.test_frac - 1.0) > 1e-9) {
    throw ConfigError("split fractions must be positive and sum to 1");
  }

  // dp setting + sweep
  const json& jp = j.at("dp_setting");
  cfg.dp.kind = dp_setting_from_name(jp.at("kind").get<std::string>());
  if (cfg.dp.kind == DpSettingKind::kCdp) {
    if (jp.contains("clipping_norm") && !jp.at("clipping_norm").is_string()) {
      cfg.dp.clip_auto = false;
      cfg.dp.clipping_norm = jp.at("clipping_norm").get<double>();
      if (!(cfg.dp.clipping_norm > 0)) throw ConfigError("clipping_norm must be > 0");
    }
    cfg.dp.heuristic_epochs = jp.value("heuristic_epochs", 10);
  }
  if (cfg.dp.kind == DpSettingKind::kLdpFull || cfg.dp.kind == DpSettingKind::kLdpTrain) {
    const std::string mech = jp.value("mechanism", "pixelize");
    if (mech == "pixelize") {
      cfg.dp.mechanism = LdpMechanism::kPixelize;
    } else if (mech == "laplace_feature") {
      cfg.dp.mechanism = LdpMechanism::kLaplaceFeature;
    } else {
      throw ConfigError("unknown LDP mechanism: " + mech);
    }
    cfg.dp.pixel_neighborhood = jp.value("neighborhood", 0.0);
    cfg.dp.pixel_cell_size = jp.value("cell_size", 1);
    cfg.dp.pixel_value_range = jp.value("value_range", 255.0);
  }

  cfg.sweep = j.value("sweep", std::vector<double>{});
  if (cfg.dp.kind != DpSettingKind::kBaseline) {
    if (cfg.sweep.empty()) throw ConfigError("sweep values must be non-empty");
    if (!std::is_sorted(cfg.sweep.begin(), cfg.sweep.end())) {
      throw ConfigError("sweep values must be sorted ascending");
    }
  }

  // model
  if (j.contains("model")) {
    const json& jm = j.at("model");
    cfg.model.latent_dim = jm.value("latent_dim", 8);
    cfg.model.encoder_hidden =
        jm.value("encoder_hidden", std::vector<std::size_t>{64});
    cfg.model.decoder_hidden =
        jm.value("decoder_hidden", std::vector<std::size_t>{64});
    cfg.model.hidden_act =
        activation_from_name(jm.value("activation", std::string("leaky_relu")));
    cfg.model.output_act =
        activation_from_name(jm.value("output_activation", std::string("sigmoid")));
    cfg.model.leaky_slope = jm.value("leaky_slope", 0.2);
    cfg.model.mean_bound = jm.value("mean_bound", 3.0);
    if (jm.contains("loss_weights")) {
      cfg.model.weights.kl = jm.at("loss_weights").value("kl", 1.0);
      cfg.model.weights.rec = jm.at("loss_weights").value("rec", 1.0);
      cfg.model.weights.cls = jm.at("loss_weights").value("cls", 0.0);
    }
    cfg.model.conditional_generation = jm.value("conditional", true);
    cfg.train.epochs = jm.value("epochs", 100);
    cfg.train.batch_size = jm.value("batch_size", 32);
    cfg.train.adam.learning_rate = jm.value("learning_rate", 1e-3);
  } else {
    cfg.model.conditional_generation = true;
  }

  if (j.contains("classifier")) {
    const json& jc = j.at("classifier");
    cfg.classifier.hidden = jc.value("hidden", std::vector<std::size_t>{32});
    cfg.classifier.max_epochs = jc.value("epochs", 200);
    cfg.classifier.batch_size = jc.value("batch_size", 32);
    cfg.classifier.adam.learning_rate = jc.value("learning_rate", 1e-3);
    cfg.classifier.patience = jc.value("patience", 10);
  }

  if (j.contains("attack")) {
    const json& ja = j.at("attack");
    cfg.attack_n_per_side = ja.value("n_per_side", 100);
    cfg.attack.n_samples = ja.value("samples", 300);
    cfg.attack.distance =
        distance_from_name(ja.value("distance", std::string("mse")));
    cfg.attack.ssim.window = ja.value("ssim_window", 7);
    cfg.attack.ssim.dynamic_range = ja.value("ssim_dynamic_range", 1.0);
  }

  cfg.seed = j.value("seed", 42);
  cfg.out_dir = j.value("out", std::string("out"));
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path);
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ConfigError("malformed config JSON: " + path);
  return parse_experiment_config(j);
}

Dataset build_dataset(const DatasetSource& source, std::uint64_t seed) {
  Rng rng = Rng(seed).split("dataset");
  switch (source.kind) {
    case DatasetSource::Kind::kBlobImages:
      return synth_blob_images(source.blob, rng);
    case DatasetSource::Kind::kToySeries:
      return synth_toy_series(source.series, rng);
    case DatasetSource::Kind::kCsv:
      return load_dataset_csv(source.path, source.record_shape);
    case DatasetSource::Kind::kContainer:
      return load_dataset_container(source.path);
  }
  throw ConfigError("unhandled dataset source");
}

std::vector<double> feature_sensitivities(const Dataset& train) {
  std::vector<double> sens(train.record_shape.back(), 1e-12);
  const std::size_t features = train.record_shape.back();
  for (std::size_t i = 0; i < train.features.numel(); ++i) {
    const std::size_t f = i % features;
    sens[f] = std::max(sens[f], std::fabs(train.features.data[i]));
  }
  return sens;
}

Dataset perturb_dataset_ldp(const Dataset& data, const DpSetting& dp, double eps_i,
                            const std::vector<double>& sensitivities, Rng rng,
                            LocalAlgorithmLedger* ledger) {
  Dataset out = data;
  if (data.record_shape.size() != 2) {
    throw ConfigError("LDP mechanisms need 2-D record shapes");
  }
  const std::size_t rows = data.record_shape[0];
  const std::size_t cols = data.record_shape[1];
  for (std::size_t i = 0; i < data.size(); ++i) {
    Rng rec_rng = rng.split(static_cast<std::uint64_t>(data.ids[i]));
    const Tensor rec = data.features.row_copy(i);
    Tensor pert;
    if (dp.mechanism == LdpMechanism::kPixelize) {
      PixelizationParams p;
      p.epsilon_per_feature = eps_i;
      p.neighborhood = dp.pixel_neighborhood > 0.0
                           ? dp.pixel_neighborhood
                           : std::sqrt(static_cast<double>(rows * cols));
      p.cell_size = dp.pixel_cell_size;
      p.value_range = dp.pixel_value_range;
      pert = pixelize_ldp(rec, rows, cols, p, rec_rng, ledger, data.ids[i]);
    } else {
      pert = laplace_feature_ldp(rec, rows, cols, eps_i, sensitivities, rec_rng,
                                 ledger, data.ids[i]);
    }
    std::copy(pert.data.begin(), pert.data.end(),
              out.features.data.begin() + i * data.dim());
  }
  return out;
}

namespace {

struct Splits {
  Dataset train, val, test;
};

struct PointOutcome {
  double acc = std::numeric_limits<double>::quiet_NaN();
  double ap = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  bool collapse = false;
  json accountant;  // null unless used
  json ledger;      // null unless used
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double delta = std::numeric_limits<double>::quiet_NaN();
};

// One full pipeline pass: optional LDP perturbation, VAE training (DP-Adam
// for cdp with z > 0), generation, classifier, MI attack on unperturbed
// records. `value` is z, eps_i or sigma_b depending on the setting; baseline
// passes NaN.
PointOutcome run_point(const ExperimentConfig& cfg, const Splits& original,
                       DpSettingKind kind, double value,
                       const std::vector<double>& sens) {
  // All points share one derived rng so a degenerate point (z = 0) is
  // bit-identical to the baseline.
  Rng point_rng = Rng(cfg.seed).split("point");
  PointOutcome out;

  // Stage 1: per-setting training data.
  const Splits* data = &original;
  Splits perturbed;
  LocalAlgorithmLedger ledger;
  if (kind == DpSettingKind::kLdpFull || kind == DpSettingKind::kLdpTrain) {
    Rng prng = point_rng.split("perturb");
    perturbed.train = perturb_dataset_ldp(original.train, cfg.dp, value, sens,
                                          prng.split("train"), &ledger);
    if (kind == DpSettingKind::kLdpFull) {
      perturbed.val = perturb_dataset_ldp(original.val, cfg.dp, value, sens,
                                          prng.split("val"), &ledger);
      perturbed.test = perturb_dataset_ldp(original.test, cfg.dp, value, sens,
                                           prng.split("test"), &ledger);
    } else {
      perturbed.val = original.val;
      perturbed.test = original.test;
    }
    data = &perturbed;
    out.ledger = json::parse(ledger.to_json());
    out.epsilon = ledger.record_total(original.train.ids.at(0));
    out.delta = 0.0;
  }

  // Stage 2: model.
  VaeConfig model_cfg = cfg.model;
  model_cfg.data_dim = original.train.dim();
  if (model_cfg.weights.cls > 0.0) model_cfg.class_count = original.train.class_count;
  if (kind == DpSettingKind::kVaeLdp) {
    model_cfg.mode = VaeMode::kVaeLdp;
    model_cfg.noise_bound = value;
  }
  Rng model_rng = point_rng.split("model");
  VaeModel model = make_vae(model_cfg, model_rng);

  // Stage 3: training configuration (DP-Adam only for cdp with z > 0).
  VaeTrainConfig train_cfg = cfg.train;
  std::unique_ptr<RdpAccountant> accountant;
  const std::size_t n_train = data->train.size();
  if (kind == DpSettingKind::kCdp && value > 0.0) {
    double clip = cfg.dp.clipping_norm;
    if (cfg.dp.clip_auto) {
      // Preliminary non-private run on a copy; C = median unclipped norm.
      VaeModel pre_model = model;
      VaeTrainConfig pre_cfg = cfg.train;
      pre_cfg.epochs = cfg.dp.heuristic_epochs;
      pre_cfg.dp.reset();
      pre_cfg.record_preclip_norms = true;
      Rng pre_rng = point_rng.split("heuristic");
      VaeTrainLog pre_log =
          train_vae(pre_model, data->train, data->val, pre_cfg, nullptr, pre_rng);
      clip = clipping_norm_heuristic(pre_log.preclip_norms);
    }
    train_cfg.dp = DpTrainConfig{clip, value};
    const std::size_t batch = std::max<std::size_t>(
        1, std::min(cfg.train.batch_size, n_train));
    accountant = std::make_unique<RdpAccountant>(
        static_cast<double>(batch) / static_cast<double>(n_train), value);
  }

  // Stage 4: train.
  Rng train_rng = point_rng.split("train");
  VaeTrainLog log = train_vae(model, data->train, data->val, train_cfg,
                              accountant.get(), train_rng);
  out.collapse = log.posterior_collapse;

  if (accountant) {
    const double delta = 1.0 / static_cast<double>(n_train);
    out.accountant = json::parse(accountant->export_json(delta));
    out.epsilon = accountant->to_eps_delta(delta).epsilon;
    out.delta = delta;
  } else if (kind == DpSettingKind::kCdp) {
    // z = 0: degenerate DP, identical to non-private training.
    out.epsilon = std::numeric_limits<double>::infinity();
    out.delta = 1.0 / static_cast<double>(n_train);
  } else if (kind == DpSettingKind::kVaeLdp) {
    const std::size_t dataset_size =
        original.train.size() + original.val.size() + original.test.size();
    out.delta = 1.0 / static_cast<double>(dataset_size);
    out.epsilon = vae_ldp_epsilon(value, out.delta, model_cfg.latent_dim,
                                  model_cfg.mean_bound);
  }

  out.gap = evaluate_vae_loss(model, data->test).total -
            evaluate_vae_loss(model, data->train).total;

  // Stage 5: generated data, sized like the training split.
  Rng gen_rng = point_rng.split("gen");
  Dataset gen;
  gen.record_shape = data->train.record_shape;
  gen.class_count = data->train.class_count;
  if (kind == DpSettingKind::kVaeLdp) {
    // The vae_ldp model is itself the local randomizer: the release is the
    // perturbed reconstruction of each training record.
    gen.features = perturb_via_vae_ldp(model, data->train.features, gen_rng);
    gen.labels = data->train.labels;
  } else if (cfg.model.conditional_generation && data->train.labeled()) {
    std::map<int, std::size_t> counts;
    for (int l : data->train.labels) counts[l] += 1;
    gen.features = Tensor::zeros({n_train, data->train.dim()});
    std::size_t row = 0;
    for (const auto& [label, count] : counts) {
      const Tensor block = generate_conditional(model, data->train, label, count,
                                                gen_rng);
      std::copy(block.data.begin(), block.data.end(),
                gen.features.data.begin() + row * data->train.dim());
      for (std::size_t i = 0; i < count; ++i) gen.labels.push_back(label);
      row += count;
    }
  } else {
    throw ConfigError(
        "prior-mode generation yields unlabeled data; the target classifier "
        "needs conditional generation");
  }
  for (std::size_t i = 0; i < gen.labels.size(); ++i) {
    gen.ids.push_back(static_cast<std::int64_t>(1'000'000 + i));
  }

  // Stage 6: target classifier on generated data, accuracy on the test split.
  Rng cls_rng = point_rng.split("classifier");
  out.acc = train_target_classifier(gen, data->test, cfg.classifier, cls_rng)
                .test_accuracy;

  // Stage 7: MI attack against unperturbed records.
  AttackConfig atk = cfg.attack;
  if (original.train.record_shape.size() == 2) {
    atk.img_rows = original.train.record_shape[0];
    atk.img_cols = original.train.record_shape[1];
  }
  Rng atk_rng = point_rng.split("attack");
  out.ap = run_attack(model, original.train, original.test, cfg.attack_n_per_side,
                      atk, atk_rng)
               .average_precision;
  return out;
}

}  // namespace

TradeoffReport run_sweep(const ExperimentConfig& cfg) {
  TradeoffReport report;
  report.config_echo = cfg.echo;
  report.seed = cfg.seed;

  const Dataset data = build_dataset(cfg.dataset, cfg.seed);
  if (!data.labeled()) {
    throw DegenerateDataError("run_sweep: the pipeline needs labeled data");
  }
  const SplitResult split =
      split_dataset(data, cfg.train_frac, cfg.val_frac, cfg.test_frac, cfg.seed);
  Splits original{split.train, split.val, split.test};

  std::vector<double> sens;
  if (cfg.dp.kind == DpSettingKind::kLdpFull ||
      cfg.dp.kind == DpSettingKind::kLdpTrain) {
    sens = feature_sensitivities(original.train);
  }

  // Non-generated reference: classifier trained directly on raw records.
  {
    Rng raw_rng = Rng(cfg.seed).split("nongenerated");
    report.nongenerated_acc =
        train_target_classifier(original.train, original.test, cfg.classifier, raw_rng)
            .test_accuracy;
  }

  // Baseline: unperturbed, non-private pipeline.
  const PointOutcome baseline = run_point(cfg, original, DpSettingKind::kBaseline,
                                          std::numeric_limits<double>::quiet_NaN(),
                                          sens);
  report.baseline_acc = baseline.acc;
  report.baseline_ap = baseline.ap;
  report.baseline_gap = baseline.gap;

  if (cfg.dp.kind == DpSettingKind::kBaseline) return report;

  const double acc_base =
      1.0 / static_cast<double>(std::max(1, original.train.class_count));
  for (double value : cfg.sweep) {
    SweepRow row;
    row.setting = dp_setting_name(cfg.dp.kind);
    row.privacy_param = value;
    try {
      const PointOutcome p = run_point(cfg, original, cfg.dp.kind, value, sens);
      row.epsilon = p.epsilon;
      row.delta = p.delta;
      row.acc = p.acc;
      row.ap = p.ap;
      row.train_test_gap = p.gap;
      row.posterior_collapse = p.collapse;
      row.accountant = p.accountant;
      row.ledger = p.ledger;
      PhiInputs phi_in;
      phi_in.atk_orig = report.baseline_ap;
      phi_in.atk_eps = p.ap;
      phi_in.acc_orig = report.baseline_acc;
      phi_in.acc_eps = p.acc;
      phi_in.acc_base = acc_base;
      row.phi_score = phi(phi_in);
    } catch (const Error& e) {
      row.error = std::string(e.kind()) + ": " + e.what();
    } catch (const std::exception& e) {
      row.error = std::string("error: ") + e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

json TradeoffReport::to_json() const {
  json j;
  j["format"] = "vaedp-report-v1";
  j["config"] = config_echo;
  j["seed"] = seed;
  j["baseline"] = {{"acc", num_or_null(baseline_acc)},
                   {"ap", num_or_null(baseline_ap)},
                   {"train_test_gap", num_or_null(baseline_gap)},
                   {"nongenerated_acc", num_or_null(nongenerated_acc)}};
  json rows_json = json::array();
  for (const SweepRow& r : rows) {
    rows_json.push_back({{"setting", r.setting},
                         {"privacy_param", r.privacy_param},
                         {"epsilon", num_or_null(r.epsilon)},
                         {"delta", num_or_null(r.delta)},
                         {"acc", num_or_null(r.acc)},
                         {"ap", num_or_null(r.ap)},
                         {"phi", num_or_null(r.phi_score)},
                         {"train_test_gap", num_or_null(r.train_test_gap)},
                         {"posterior_collapse", r.posterior_collapse},
                         {"accountant", r.accountant},
                         {"ledger", r.ledger},
                         {"error", r.error}});
  }
  j["rows"] = rows_json;
  return j;
}

TradeoffReport TradeoffReport::from_json(const json& j) {
  if (j.value("format", "") != "vaedp-report-v1") {
    throw IoError("not a vaedp-report-v1 report");
  }
  TradeoffReport r;
  r.config_echo = j.at("config");
  r.seed = j.at("seed").get<std::uint64_t>();
  r.baseline_acc = num_from_json(j.at("baseline").at("acc"));
  r.baseline_ap = num_from_json(j.at("baseline").at("ap"));
  r.baseline_gap = num_from_json(j.at("baseline").at("train_test_gap"));
  r.nongenerated_acc = num_from_json(j.at("baseline").at("nongenerated_acc"));
  for (const json& jr : j.at("rows")) {
    SweepRow row;
    row.setting = jr.at("setting").get<std::string>();
    row.privacy_param = jr.at("privacy_param").get<double>();
    row.epsilon = num_from_json(jr.at("epsilon"));
    row.delta = num_from_json(jr.at("delta"));
    row.acc = num_from_json(jr.at("acc"));
    row.ap = num_from_json(jr.at("ap"));
    row.phi_score = num_from_json(jr.at("phi"));
    row.train_test_gap = num_from_json(jr.at("train_test_gap"));
    row.posterior_collapse = jr.at("posterior_collapse").get<bool>();
    row.accountant = jr.at("accountant");
    row.ledger = jr.at("ledger");
    row.error = jr.at("error").get<std::string>();
    r.rows.push_back(std::move(row));
  }
  return r;
}

std::string report_summary_csv(const TradeoffReport& report) {
  std::ostringstream out;
  out << "setting,privacy_param,epsilon,delta,acc,ap,phi,train_test_gap\n";
  out << "baseline,,,"
      << ',' << csv_cell(report.baseline_acc) << ',' << csv_cell(report.baseline_ap)
      << ",," << csv_cell(report.baseline_gap) << "\n";
  for (const SweepRow& r : report.rows) {
    out << r.setting << ',' << fmt(r.privacy_param) << ',' << csv_cell(r.epsilon)
        << ',' << csv_cell(r.delta) << ',' << csv_cell(r.acc) << ','
        << csv_cell(r.ap) << ',' << csv_cell(r.phi_score) << ','
        << csv_cell(r.train_test_gap) << "\n";
  }
  return out.str();
}

namespace {

// Minimal deterministic SVG line chart; x positions are categorical with the
// epsilon (or sweep value) printed under each point.
std::string svg_line_chart(const std::string& title, const std::string& ylabel,
                           double ymax, const std::vector<std::string>& xlabels,
                           const std::vector<double>& values) {
  const double width = 640, height = 400;
  const double ml = 70, mr = 20, mt = 40, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;
  const std::size_t n = values.size();

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
    << "\" height=\"" << height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
    << mt + ph << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
    << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  s << "<text x=\"16\" y=\"" << mt + ph / 2
    << "\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
    << mt + ph / 2 << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = ymax * tick / 4.0;
    const double y = mt + ph - ph * tick / 4.0;
    s << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(y + 4, "%.1f")
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
      << fmt(v, "%.3g") << "</text>\n";
  }

  auto xpos = [&](std::size_t i) {
    if (n == 1) return ml + pw / 2;
    return ml + pw * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  auto ypos = [&](double v) {
    const double clamped = std::isfinite(v) ? std::min(v, ymax) : ymax;
    return mt + ph - ph * (ymax > 0 ? clamped / ymax : 0.0);
  };

  std::ostringstream poly;
  bool have_poly = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(values[i])) continue;
    poly << (have_poly ? " " : "") << fmt(xpos(i), "%.2f") << ','
         << fmt(ypos(values[i]), "%.2f");
    have_poly = true;
  }
  if (have_poly) {
    s << "<polyline points=\"" << poly.str()
      << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isnan(values[i])) {
      s << "<circle cx=\"" << fmt(xpos(i), "%.2f") << "\" cy=\""
        << fmt(ypos(values[i]), "%.2f") << "\" r=\"4\" fill=\"#1f77b4\"/>\n";
    }
    s << "<text x=\"" << fmt(xpos(i), "%.2f") << "\" y=\"" << mt + ph + 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
      << xlabels[i] << "</text>\n";
  }
  s << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
       "epsilon</text>\n";
  s << "</svg>\n";
  return s.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

void emit_report(const TradeoffReport& report, const std::string& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);

  write_file(out_dir + "/report.json", report.to_json().dump(2) + "\n");
  write_file(out_dir + "/summary.csv", report_summary_csv(report));

  std::vector<std::string> xlabels;
  std::vector<double> accs, aps, phis;
  for (const SweepRow& r : report.rows) {
    xlabels.push_back(std::isinf(r.epsilon) ? "inf"
                                            : std::isnan(r.epsilon)
                                                  ? fmt(r.privacy_param, "%.3g")
                                                  : fmt(r.epsilon, "%.3g"));
    accs.push_back(r.acc);
    aps.push_back(r.ap);
    phis.push_back(r.phi_score);
  }
  write_file(out_dir + "/accuracy_vs_epsilon.svg",
             svg_line_chart("Target classifier accuracy", "accuracy", 1.0, xlabels,
                            accs));
  write_file(out_dir + "/mi_ap_vs_epsilon.svg",
             svg_line_chart("MI attack average precision", "MI AP", 1.0, xlabels,
                            aps));
  write_file(out_dir + "/phi_vs_epsilon.svg",
             svg_line_chart("Privacy-accuracy trade-off", "phi", 2.0, xlabels, phis));
}

TradeoffReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report: " + path);
  json j = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw IoError("malformed report JSON: " + path);
  return TradeoffReport::from_json(j);
}

}  // namespace vaedp

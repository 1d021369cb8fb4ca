// Copyright 2026 The voicesep Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "voicesep/config.hpp"

#include <fstream>
#include <initializer_list>
#include <string>

#include "voicesep/error.hpp"

namespace voicesep {
namespace {

using nlohmann::json;

void RejectUnknown(const json& j, std::initializer_list<const char*> known, const char* where) {
  if (!j.is_object()) Fail(ErrorKind::kParameter, std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) Fail(ErrorKind::kParameter, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void Read(const json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

json AdamToJson(const AdamConfig& c) {
  return {{"learning_rate", c.learning_rate},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"epsilon", c.epsilon}};
}

void AdamFromJson(const json& j, AdamConfig& c) {
  RejectUnknown(j, {"learning_rate", "beta1", "beta2", "epsilon"}, "optimizer");
  Read(j, "learning_rate", c.learning_rate);
  Read(j, "beta1", c.beta1);
  Read(j, "beta2", c.beta2);
  Read(j, "epsilon", c.epsilon);
}

json ScheduleToJson(const TrainingSchedule& s) {
  return {{"pretrain_epochs", s.pretrain_epochs},
          {"adversarial_epochs", s.adversarial_epochs},
          {"batch_size", s.batch_size},
          {"d_steps_per_g_step", s.d_steps_per_g_step},
          {"pretrain_adam", AdamToJson(s.pretrain_adam)},
          {"generator_adam", AdamToJson(s.generator_adam)},
          {"discriminator_adam", AdamToJson(s.discriminator_adam)},
          {"adversarial_mse_weight", s.adversarial_mse_weight},
          {"update_generator", s.update_generator},
          {"seed", s.seed}};
}

void ScheduleFromJson(const json& j, TrainingSchedule& s) {
  RejectUnknown(j,
                {"pretrain_epochs", "adversarial_epochs", "batch_size", "d_steps_per_g_step",
                 "pretrain_adam", "generator_adam", "discriminator_adam",
                 "adversarial_mse_weight", "update_generator", "seed"},
                "schedule");
  Read(j, "pretrain_epochs", s.pretrain_epochs);
  Read(j, "adversarial_epochs", s.adversarial_epochs);
  Read(j, "batch_size", s.batch_size);
  Read(j, "d_steps_per_g_step", s.d_steps_per_g_step);
  if (j.contains("pretrain_adam")) AdamFromJson(j.at("pretrain_adam"), s.pretrain_adam);
  if (j.contains("generator_adam")) AdamFromJson(j.at("generator_adam"), s.generator_adam);
  if (j.contains("discriminator_adam")) {
    AdamFromJson(j.at("discriminator_adam"), s.discriminator_adam);
  }
  Read(j, "adversarial_mse_weight", s.adversarial_mse_weight);
  Read(j, "update_generator", s.update_generator);
  Read(j, "seed", s.seed);
}

}  // namespace

void RunConfig::Validate() const {
  if (sample_rate <= 0 || frame_size <= 0 || hop <= 0) {
    Fail(ErrorKind::kParameter, "rates and frame sizes must be positive");
  }
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    Fail(ErrorKind::kParameter, "split_fraction must lie in (0, 1)");
  }
  if (!(normalization_percentile > 0.0 && normalization_percentile <= 100.0)) {
    Fail(ErrorKind::kParameter, "normalization_percentile must lie in (0, 100]");
  }
  if (filter_length < 1) Fail(ErrorKind::kParameter, "filter_length must be positive");
  for (int w : generator_hidden) {
    if (w <= 0) Fail(ErrorKind::kParameter, "generator widths must be positive");
  }
  for (int w : discriminator_hidden) {
    if (w <= 0) Fail(ErrorKind::kParameter, "discriminator widths must be positive");
  }
  if (channels.music_channel == channels.vocal_channel ||
      (channels.music_channel != 0 && channels.music_channel != 1) ||
      (channels.vocal_channel != 0 && channels.vocal_channel != 1)) {
    Fail(ErrorKind::kParameter, "channel map must use channels 0 and 1 once each");
  }
  schedule.Validate();
}

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = json{{"sample_rate", c.sample_rate},
           {"frame_size", c.frame_size},
           {"hop", c.hop},
           {"variant", std::string(VariantName(c.variant))},
           {"schedule", ScheduleToJson(c.schedule)},
           {"normalization_percentile", c.normalization_percentile},
           {"split_seed", c.split_seed},
           {"split_fraction", c.split_fraction},
           {"generator_hidden", c.generator_hidden},
           {"discriminator_hidden", c.discriminator_hidden},
           {"generator_seed", c.generator_seed},
           {"discriminator_seed", c.discriminator_seed},
           {"channels",
            {{"music_channel", c.channels.music_channel},
             {"vocal_channel", c.channels.vocal_channel}}},
           {"filter_length", c.filter_length}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  RejectUnknown(j,
                {"sample_rate", "frame_size", "hop", "variant", "schedule",
                 "normalization_percentile", "split_seed", "split_fraction", "generator_hidden",
                 "discriminator_hidden", "generator_seed", "discriminator_seed", "channels",
                 "filter_length"},
                "config");
  Read(j, "sample_rate", c.sample_rate);
  Read(j, "frame_size", c.frame_size);
  Read(j, "hop", c.hop);
  if (j.contains("variant")) c.variant = ParseVariant(j.at("variant").get<std::string>());
  if (j.contains("schedule")) ScheduleFromJson(j.at("schedule"), c.schedule);
  Read(j, "normalization_percentile", c.normalization_percentile);
  Read(j, "split_seed", c.split_seed);
  Read(j, "split_fraction", c.split_fraction);
  Read(j, "generator_hidden", c.generator_hidden);
  Read(j, "discriminator_hidden", c.discriminator_hidden);
  Read(j, "generator_seed", c.generator_seed);
  Read(j, "discriminator_seed", c.discriminator_seed);
  if (j.contains("channels")) {
    const json& ch = j.at("channels");
    RejectUnknown(ch, {"music_channel", "vocal_channel"}, "channels");
    Read(ch, "music_channel", c.channels.music_channel);
    Read(ch, "vocal_channel", c.channels.vocal_channel);
  }
  Read(j, "filter_length", c.filter_length);
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorKind::kNotFound, "config " + path.string() + " not found");
  RunConfig config;
  try {
    from_json(json::parse(in), config);
  } catch (const json::exception& e) {
    Fail(ErrorKind::kParameter, path.string() + ": " + e.what());
  }
  config.Validate();
  return config;
}

}  // namespace voicesep

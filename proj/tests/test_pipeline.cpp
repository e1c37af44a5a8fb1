#include "doctest.h"

#include "ioctx/error.hpp"
#include "ioctx/pipeline.hpp"
#include "ioctx/synthetic.hpp"

#include <filesystem>
#include <sstream>

using namespace ioctx;

TEST_CASE("run config parsing") {
  std::stringstream in(
      "# campaign\n"
      "dataset = bout-series\n"
      "model = rocket\n"
      "channel = magnitude\n"
      "length = resample\n"
      "folds = loso\n"
      "seed = 4   # trailing comment\n"
      "rocket_kernels = 500\n");
  const auto cfg = read_run_config(in);
  CHECK(cfg.dataset == DatasetKind::bout_series);
  CHECK(cfg.model == ModelKind::rocket);
  CHECK(cfg.channel == ChannelKind::magnitude);
  CHECK(cfg.length == LengthHandling::resample);
  CHECK(cfg.folds == FoldKind::loso);
  CHECK(cfg.seed == 4);
  CHECK(cfg.rocket_kernels == 500);
  CHECK(cfg.window_len_s == 60);
  CHECK(cfg.campaign_id() == "rocket/bout-series/resample/magnitude");
  CHECK(cfg.model_spec().rocket_kernels == 500);
  CHECK(cfg.to_json()["model"] == "rocket");

  std::stringstream bad("unknown_key = 1\n");
  CHECK_THROWS_WITH_AS(read_run_config(bad), doctest::Contains("unknown_key"), InvalidInput);
  std::stringstream bad_value("k = many\n");
  CHECK_THROWS_AS(read_run_config(bad_value), InvalidInput);
}

TEST_CASE("illegal campaign combinations are rejected") {
  RunConfig cfg;
  cfg.dataset = DatasetKind::bout_series;
  cfg.model = ModelKind::rocket;
  cfg.length = LengthHandling::original;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg.model = ModelKind::minirocket;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg.model = ModelKind::dtw;
  CHECK_NOTHROW(cfg.validate());
  cfg.model = ModelKind::gnb;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
  cfg.dataset = DatasetKind::window_dmo;
  CHECK_NOTHROW(cfg.validate());
  cfg.model = ModelKind::weasel;
  CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}

TEST_CASE("end to end on a small synthetic cohort") {
  auto cfg = skewed_cohort_config(2);
  cfg.duration_s = 600;
  cfg.n_subjects = 4;
  cfg.outdoor_fraction = {0.5, 0.3, 1.0, 0.4};
  std::vector<SubjectArtifacts> subjects;
  for (const auto& sc : generate_scenario(cfg)) {
    const auto labels = label_recording(sc.gps, sc.imu.start_time, static_cast<int>(sc.imu.duration_s()));
    double agree = 0;
    for (std::size_t t = 0; t < labels.probs.size(); ++t) agree += labels.probs[t] == sc.truth.probs[t];
    CHECK(agree / static_cast<double>(labels.probs.size()) >= 0.97);
    subjects.push_back(process_subject(sc.imu, labels));
  }
  const auto wd = build_window_dmo_dataset(subjects);
  CHECK(wd.rows() > 0);
  CHECK(wd.feature_names.front() == "number_of_steps");
  const auto bs = build_bout_series_dataset(subjects, ChannelKind::magnitude, "z", LengthHandling::pad, 60);
  CHECK(bs.fixed_length() == 6000);
  const auto orig = build_bout_series_dataset(subjects, ChannelKind::vertical, "z", LengthHandling::original, 60);
  CHECK(orig.length_mode == LengthMode::variable);

  RunConfig run;
  run.dataset = DatasetKind::window_dmo;
  run.model = ModelKind::gnb;
  run.k = 3;
  const auto report = train_eval(run, subjects);
  CHECK(report.folds.size() == 3);
  CHECK(report.config["run"]["model"] == "gnb");

  run.folds = FoldKind::loso;
  const auto loso = train_eval(run, subjects);
  CHECK(loso.folds.size() == 4);
}

TEST_CASE("artifact paths and output dir") {
  CHECK(artifact_path("out", "S01", "imu") == std::filesystem::path("out") / "S01_imu.csv");
  CHECK(!default_output_dir().empty());
}

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The lastde Authors

#include "lastde/commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <map>
#include <ostream>
#include <thread>
#include <variant>

#include "lastde/record_io.hpp"
#include "lastde/sampler.hpp"

namespace lastde {
namespace {

// A record slot in an input file: either a parsed record or the parse error
// for that line.
struct Entry {
  std::variant<TextRecord, std::string> value;
  std::size_t line = 0;
};

std::vector<Entry> read_entries(const std::filesystem::path& input) {
  RecordReader reader(input);
  std::vector<Entry> entries;
  for (;;) {
    try {
      auto r = reader.next();
      if (!r) break;
      entries.push_back({std::move(*r), reader.line()});
    } catch (const RecordError& e) {
      entries.push_back({std::string(e.what()), e.line()});
    }
  }
  return entries;
}

double score_value(const TextRecord& r, const ScoreOptions& o) {
  switch (o.detector) {
    case DetectorKind::kLikelihood: return log_likelihood(r.tps());
    case DetectorKind::kLogRank: return log_rank(r.rank);
    case DetectorKind::kEntropy: return mean_entropy(r.entropy_span());
    case DetectorKind::kLrr: return lrr(r.tps(), r.rank);
    case DetectorKind::kLastde: return lastde(r.tps(), o.mde_config(), o.agg, o.strict);
    case DetectorKind::kLastdePP:
      return lastde_pp_pipeline(r, o.lastde_pp_config(), o.agg, o.strict);
  }
  throw Error(Errc::kUnknownDetector, "unknown detector");
}

void write_score_row(std::ostream& out, const ScoreRow& row) {
  out << row.id << '\t' << row.detector << '\t';
  if (row.ok()) {
    out << format_double(*row.score) << "\tok\n";
  } else {
    out << "nan\terror: " << row.error << '\n';
  }
}

std::string majority_source_model(const std::vector<const TextRecord*>& records) {
  std::map<std::string, std::size_t> counts;
  for (const auto* r : records) {
    if (r->label == Label::kMachine && !r->provenance.source_model_name.empty()) {
      ++counts[r->provenance.source_model_name];
    }
  }
  std::string best;
  std::size_t best_count = 0;
  for (const auto& [name, c] : counts) {
    if (c > best_count) {
      best = name;
      best_count = c;
    }
  }
  return best.empty() ? "-" : best;
}

}  // namespace

MdeConfig ScoreOptions::mde_config() const {
  MdeConfig cfg = detector == DetectorKind::kLastdePP ? lastde_pp_profile() : lastde_profile();
  if (window_size) cfg.window_size = *window_size;
  if (bin_multiplier) cfg.bin_multiplier = *bin_multiplier;
  if (scale_count) cfg.scale_count = *scale_count;
  cfg.clamp_scales = clamp_scales;
  return cfg;
}

LastdePPConfig ScoreOptions::lastde_pp_config() const {
  LastdePPConfig cfg;
  cfg.mde = mde_config();
  cfg.sample_count = samples;
  cfg.seed = seed;
  return cfg;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

ScoreRow score_record(const TextRecord& record, const ScoreOptions& options) {
  ScoreRow row{record.id, std::string(detector_name(options.detector)), std::nullopt, {}};
  try {
    const double v = score_value(record, options);
    if (!std::isfinite(v)) throw Error(Errc::kInvalidInput, "score is not finite");
    row.score = v;
  } catch (const Error& e) {
    row.error = std::string(errc_name(e.code())) + ": " + e.what();
  }
  return row;
}

std::vector<ScoreRow> score_records(std::span<const TextRecord> records,
                                    const ScoreOptions& options) {
  std::vector<ScoreRow> rows(records.size());
  unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(std::max<std::size_t>(records.size(), 1)));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      rows[i] = score_record(records[i], options);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
  }
  return rows;
}

ExitCode cmd_score(const std::filesystem::path& input, const ScoreOptions& options,
                   std::ostream& out, std::ostream& err) {
  std::vector<Entry> entries;
  try {
    entries = read_entries(input);
  } catch (const Error& e) {
    err << "fatal: " << e.what() << '\n';
    return ExitCode::kFatal;
  }

  std::vector<TextRecord> records;
  for (auto& e : entries) {
    if (auto* r = std::get_if<TextRecord>(&e.value)) records.push_back(std::move(*r));
  }
  const auto rows = score_records(records, options);

  const std::string det(detector_name(options.detector));
  out << "id\tdetector\tscore\tstatus\n";
  std::size_t failures = 0;
  std::size_t next_row = 0;
  for (const auto& e : entries) {
    if (const auto* msg = std::get_if<std::string>(&e.value)) {
      write_score_row(out, {"line:" + std::to_string(e.line), det, std::nullopt,
                            std::string(errc_name(Errc::kFormat)) + ": " + *msg});
      ++failures;
      continue;
    }
    const auto& row = rows[next_row++];
    write_score_row(out, row);
    if (!row.ok()) ++failures;
  }
  if (failures) {
    err << failures << " of " << entries.size() << " records failed\n";
    return ExitCode::kPartial;
  }
  return ExitCode::kClean;
}

ExitCode cmd_eval(std::span<const std::filesystem::path> inputs, const EvalOptions& options,
                  std::ostream& out, std::ostream& err, std::vector<EvalReport>* reports) {
  if (inputs.empty() || options.detectors.empty()) {
    err << "fatal: eval needs at least one input and one detector\n";
    return ExitCode::kFatal;
  }

  ExitCode status = ExitCode::kClean;
  std::vector<EvalReport> all;
  std::map<std::string, std::vector<double>> per_detector_auroc;

  out << "detector\tdataset\tauroc\tthreshold\ttpr\tfpr\n";
  for (const auto& input : inputs) {
    std::vector<Entry> entries;
    try {
      entries = read_entries(input);
    } catch (const Error& e) {
      err << "fatal: " << e.what() << '\n';
      return ExitCode::kFatal;
    }
    std::vector<TextRecord> records;
    for (auto& e : entries) {
      if (auto* r = std::get_if<TextRecord>(&e.value)) {
        records.push_back(std::move(*r));
      } else {
        err << input.string() << ": " << std::get<std::string>(e.value) << '\n';
        status = ExitCode::kPartial;
      }
    }
    std::vector<const TextRecord*> labelled;
    for (const auto& r : records) labelled.push_back(&r);
    const std::string dataset = input.stem().string();
    const std::string source = majority_source_model(labelled);

    for (const auto det : options.detectors) {
      ScoreOptions so = options.score;
      so.detector = det;
      const auto rows = score_records(records, so);

      ScoredDataset ds;
      ds.detector_name = std::string(detector_name(det));
      ds.dataset_name = dataset;
      ds.source_model_name = source;
      for (std::size_t i = 0; i < records.size(); ++i) {
        if (!rows[i].ok()) {
          err << dataset << ": " << rows[i].id << ": " << rows[i].error << '\n';
          status = ExitCode::kPartial;
          continue;
        }
        if (records[i].label == Label::kHuman) ds.human_scores.push_back(*rows[i].score);
        if (records[i].label == Label::kMachine) ds.machine_scores.push_back(*rows[i].score);
      }
      if (ds.human_scores.empty() || ds.machine_scores.empty()) {
        err << "fatal: " << dataset << ": detector " << ds.detector_name
            << " needs both human and machine records\n";
        return ExitCode::kFatal;
      }
      const EvalReport rep = calibrate_threshold(ds, options.objective);
      out << rep.detector_name << '\t' << rep.dataset_name << '\t' << format_double(rep.auroc)
          << '\t' << format_double(rep.threshold) << '\t' << format_double(rep.tpr) << '\t'
          << format_double(rep.fpr) << '\n';
      per_detector_auroc[rep.detector_name].push_back(rep.auroc);
      all.push_back(rep);
    }
  }

  if (inputs.size() > 1) {
    for (const auto det : options.detectors) {
      const auto& v = per_detector_auroc[std::string(detector_name(det))];
      double mean = 0.0;
      for (double a : v) mean += a;
      mean /= static_cast<double>(v.size());
      out << detector_name(det) << "\taverage\t" << format_double(mean) << "\t-\t-\t-\n";
    }
  }
  if (reports) *reports = std::move(all);
  return status;
}

ExitCode cmd_inspect(const std::filesystem::path& input, const std::string& record_id,
                     const ScoreOptions& options, std::ostream& out, std::ostream& err) {
  try {
    RecordReader reader(input);
    while (auto r = reader.next()) {
      if (r->id != record_id) continue;
      const MdeProfile profile = mde(r->tps(), options.mde_config());
      if (profile.clamped) {
        err << "warning: scale count reduced to " << profile.scales_used << " for record "
            << record_id << '\n';
      }
      out << "scale\tde\n";
      for (int tau = 1; tau <= profile.scales_used; ++tau) {
        out << tau << '\t' << format_double(profile.de_values[tau - 1]) << '\n';
      }
      return ExitCode::kClean;
    }
    err << "fatal: no record with id '" << record_id << "'\n";
  } catch (const Error& e) {
    err << "fatal: " << errc_name(e.code()) << ": " << e.what() << '\n';
  }
  return ExitCode::kFatal;
}

ExitCode cmd_validate(const std::filesystem::path& input, std::ostream& out, std::ostream& err) {
  std::vector<Entry> entries;
  try {
    entries = read_entries(input);
  } catch (const Error& e) {
    err << "fatal: " << e.what() << '\n';
    return ExitCode::kFatal;
  }
  std::size_t bad = 0;
  std::size_t with_topk = 0;
  for (const auto& e : entries) {
    if (const auto* msg = std::get_if<std::string>(&e.value)) {
      out << *msg << '\n';
      ++bad;
    } else if (std::get<TextRecord>(e.value).topk) {
      ++with_topk;
    }
  }
  out << "records\t" << entries.size() - bad << "\ninvalid\t" << bad << "\nwith_topk\t"
      << with_topk << '\n';
  return bad ? ExitCode::kPartial : ExitCode::kClean;
}

}  // namespace lastde

#include "arena/corpus.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_set>

#include "arena/error.hpp"
#include "arena/jsonl.hpp"

namespace arena {

namespace {

bool blank(std::string_view s) { return trim(s).empty(); }

std::string line_prefix(std::size_t line) {
  return "line " + std::to_string(line) + ": ";
}

void validate_record(const InstructionRecord& r) {
  if (r.id.empty()) throw Error(ErrorCode::kEmptyField, "record with empty id");
  if (blank(r.instruction)) {
    throw Error(ErrorCode::kEmptyField,
                "record '" + r.id + "' has an empty instruction");
  }
  if (r.reference_answer && blank(*r.reference_answer)) {
    throw Error(ErrorCode::kEmptyField,
                "record '" + r.id + "' has an empty reference_answer");
  }
}

}  // namespace

EvalDataset::EvalDataset(std::string name, std::vector<InstructionRecord> records)
    : name_(std::move(name)), records_(std::move(records)) {
  index_.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    validate_record(records_[i]);
    if (!index_.emplace(records_[i].id, i).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "duplicate record id '" + records_[i].id + "'");
    }
  }
}

const InstructionRecord* EvalDataset::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &records_[it->second];
}

std::vector<std::string> EvalDataset::categories() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& r : records_) {
    if (!r.category.empty() && seen.insert(r.category).second) {
      out.push_back(r.category);
    }
  }
  return out;
}

const std::string* ResponseSet::response_for(const std::string& record_id) const {
  auto it = responses.find(record_id);
  return it == responses.end() ? nullptr : &it->second;
}

EvalDataset load_dataset(const std::filesystem::path& path) {
  std::vector<InstructionRecord> records;
  std::unordered_set<std::string> ids;
  for_each_json_line(path, [&](const Json& obj, std::size_t line) {
    InstructionRecord r;
    r.id = required_string(obj, "id", line);
    bool present = false;
    r.category = optional_string(obj, "category", line, &present);
    r.instruction = required_string(obj, "instruction", line);
    std::string ref = optional_string(obj, "reference_answer", line, &present);
    if (present) r.reference_answer = std::move(ref);
    try {
      validate_record(r);
    } catch (const Error& e) {
      throw Error(e.code(), line_prefix(line) + e.what());
    }
    if (!ids.insert(r.id).second) {
      throw Error(ErrorCode::kDuplicateId,
                  line_prefix(line) + "duplicate record id '" + r.id + "'");
    }
    records.push_back(std::move(r));
  });
  return EvalDataset(path.stem().string(), std::move(records));
}

void save_dataset(const EvalDataset& dataset,
                  const std::filesystem::path& path) {
  std::string out;
  for (const auto& r : dataset.records()) {
    Json obj = {{"id", r.id},
                {"category", r.category},
                {"instruction", r.instruction},
                {"reference_answer", nullptr}};
    if (r.reference_answer) obj["reference_answer"] = *r.reference_answer;
    out += obj.dump();
    out += '\n';
  }
  write_file_atomically(path, out);
}

void validate_finetune(std::span<const FinetunePair> pairs) {
  std::unordered_set<std::string> ids;
  for (const auto& p : pairs) {
    if (p.id.empty()) throw Error(ErrorCode::kEmptyField, "pair with empty id");
    if (blank(p.instruction) || blank(p.response) || p.source.empty()) {
      throw Error(ErrorCode::kEmptyField,
                  "pair '" + p.id + "' has an empty instruction, response or source");
    }
    if (p.quality_score && !(*p.quality_score >= 0.0 && *p.quality_score <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "pair '" + p.id + "' has quality_score outside [0,1]");
    }
    if (!ids.insert(p.id).second) {
      throw Error(ErrorCode::kDuplicateId, "duplicate pair id '" + p.id + "'");
    }
  }
}

std::vector<FinetunePair> load_finetune(const std::filesystem::path& path) {
  std::vector<FinetunePair> pairs;
  for_each_json_line(path, [&](const Json& obj, std::size_t line) {
    FinetunePair p;
    p.id = required_string(obj, "id", line);
    p.instruction = required_string(obj, "instruction", line);
    p.response = required_string(obj, "response", line);
    p.source = required_string(obj, "source", line);
    if (auto it = obj.find("quality_score"); it != obj.end() && !it->is_null()) {
      if (!it->is_number()) {
        throw Error(ErrorCode::kParse,
                    line_prefix(line) + "quality_score is not a number");
      }
      p.quality_score = it->get<double>();
    }
    pairs.push_back(std::move(p));
  });
  validate_finetune(pairs);
  return pairs;
}

void save_finetune(std::span<const FinetunePair> pairs,
                   const std::filesystem::path& path) {
  std::string out;
  for (const auto& p : pairs) {
    Json obj = {{"id", p.id},
                {"instruction", p.instruction},
                {"response", p.response},
                {"source", p.source},
                {"quality_score", nullptr}};
    if (p.quality_score) obj["quality_score"] = *p.quality_score;
    out += obj.dump();
    out += '\n';
  }
  write_file_atomically(path, out);
}

std::vector<FinetunePair> filter_by_score(std::span<const FinetunePair> pairs,
                                          QualityScorer& scorer,
                                          double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "threshold must lie in [0,1]");
  }
  std::vector<FinetunePair> kept;
  for (const auto& p : pairs) {
    double s = 0.0;
    try {
      s = scorer.score(p);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kScorerFailure,
                  "scorer failed on pair '" + p.id + "': " + e.what());
    }
    if (!(s >= 0.0 && s <= 1.0)) {
      throw Error(ErrorCode::kScorerFailure,
                  "scorer returned a value outside [0,1] for pair '" + p.id + "'");
    }
    if (s >= threshold) {
      FinetunePair out = p;
      out.quality_score = s;
      kept.push_back(std::move(out));
    }
  }
  return kept;
}

std::vector<FinetunePair> combine(
    std::span<const std::vector<FinetunePair>> parts) {
  if (parts.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "combine needs at least one part");
  }
  std::size_t total = 0;
  for (const auto& part : parts) {
    validate_finetune(part);
    total += part.size();
  }
  std::vector<FinetunePair> out;
  out.reserve(total);
  for (const auto& part : parts) {
    for (const auto& p : part) {
      FinetunePair q = p;
      q.id = p.source + "/" + p.id;
      out.push_back(std::move(q));
    }
  }
  validate_finetune(out);
  return out;
}

ResponseSet load_response_set(const std::filesystem::path& path,
                              const EvalDataset& dataset) {
  ResponseSet set;
  bool have_header = false;
  for_each_json_line(path, [&](const Json& obj, std::size_t line) {
    if (!have_header) {
      have_header = true;
      bool present = false;
      set.model_name = optional_string(obj, "model_name", line, &present);
      if (blank(set.model_name)) {
        throw Error(ErrorCode::kEmptyField,
                    path.string() + ": header line lacks model_name");
      }
      set.dataset_name = optional_string(obj, "dataset_name", line, &present);
      if (!present) set.dataset_name = dataset.name();
      if (set.dataset_name != dataset.name()) {
        throw Error(ErrorCode::kInvalidArgument,
                    path.string() + ": responses target dataset '" +
                        set.dataset_name + "', not '" + dataset.name() + "'");
      }
      return;
    }
    std::string id = required_string(obj, "id", line);
    std::string text = required_string(obj, "response", line);
    if (!dataset.contains(id)) {
      throw Error(ErrorCode::kUnknownId,
                  path.string() + ": " + line_prefix(line) +
                      "response for unknown record id '" + id + "'");
    }
    if (!set.responses.emplace(id, std::move(text)).second) {
      throw Error(ErrorCode::kDuplicateId,
                  path.string() + ": " + line_prefix(line) +
                      "duplicate response for '" + id + "'");
    }
  });
  if (!have_header) {
    throw Error(ErrorCode::kEmptyField,
                path.string() + ": missing model_name header line");
  }
  return set;
}

void save_response_set(const ResponseSet& set,
                       const std::filesystem::path& path) {
  std::string out =
      Json{{"model_name", set.model_name}, {"dataset_name", set.dataset_name}}
          .dump() +
      "\n";
  for (const auto& [id, text] : set.responses) {
    out += Json{{"id", id}, {"response", text}}.dump();
    out += '\n';
  }
  write_file_atomically(path, out);
}

std::vector<ResponseSet> load_response_dir(const std::filesystem::path& dir,
                                           const EvalDataset& dataset) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<ResponseSet> sets;
  std::set<std::string> models;
  for (const auto& f : files) {
    ResponseSet s = load_response_set(f, dataset);
    if (!models.insert(s.model_name).second) {
      throw Error(ErrorCode::kDuplicateId,
                  "two response files for model '" + s.model_name + "'");
    }
    sets.push_back(std::move(s));
  }
  return sets;
}

}  // namespace arena

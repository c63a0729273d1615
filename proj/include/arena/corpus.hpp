#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace arena {

// One evaluation item: an instruction, its category label and, for datasets
// scored with automatic metrics, a reference answer.
struct InstructionRecord {
  std::string id;
  std::string category;
  std::string instruction;
  std::optional<std::string> reference_answer;

  friend bool operator==(const InstructionRecord&,
                         const InstructionRecord&) = default;
};

class EvalDataset {
 public:
  EvalDataset() = default;
  // Validates ids (non-empty, distinct) and text fields; throws on violation.
  EvalDataset(std::string name, std::vector<InstructionRecord> records);

  const std::string& name() const { return name_; }
  const std::vector<InstructionRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  const InstructionRecord* find(const std::string& id) const;
  bool contains(const std::string& id) const { return find(id) != nullptr; }

  // Distinct non-empty category labels, in order of first appearance.
  std::vector<std::string> categories() const;

 private:
  std::string name_;
  std::vector<InstructionRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct FinetunePair {
  std::string id;
  std::string instruction;
  std::string response;
  std::string source;
  std::optional<double> quality_score;

  friend bool operator==(const FinetunePair&, const FinetunePair&) = default;
};

// One model's answers to one evaluation dataset. Records without an answer
// are simply absent from `responses`.
struct ResponseSet {
  std::string model_name;
  std::string dataset_name;
  std::map<std::string, std::string> responses;

  const std::string* response_for(const std::string& record_id) const;
};

// Scores instruction/response pairs for quality. Implementations must return
// a value in [0,1] or throw.
class QualityScorer {
 public:
  virtual ~QualityScorer() = default;
  virtual double score(const FinetunePair& pair) = 0;
};

// Dataset files: one {id, category, instruction, reference_answer} object per
// line. The dataset name is the file stem ("V.jsonl" -> "V").
EvalDataset load_dataset(const std::filesystem::path& path);
void save_dataset(const EvalDataset& dataset, const std::filesystem::path& path);

// Finetune files: one {id, instruction, response, source, quality_score}
// object per line.
std::vector<FinetunePair> load_finetune(const std::filesystem::path& path);
void save_finetune(std::span<const FinetunePair> pairs,
                   const std::filesystem::path& path);
void validate_finetune(std::span<const FinetunePair> pairs);

// Keeps the pairs whose score is >= threshold, preserving order and attaching
// the score. Any scorer failure aborts the whole call naming the pair id.
std::vector<FinetunePair> filter_by_score(std::span<const FinetunePair> pairs,
                                          QualityScorer& scorer,
                                          double threshold);

// Concatenates the parts in order, rewriting ids to "<source>/<id>". No
// deduplication is performed; colliding rewritten ids throw kDuplicateId.
std::vector<FinetunePair> combine(
    std::span<const std::vector<FinetunePair>> parts);

// Response files: a {model_name, dataset_name} header line followed by
// {id, response} lines. Ids must exist in `dataset`.
ResponseSet load_response_set(const std::filesystem::path& path,
                              const EvalDataset& dataset);
void save_response_set(const ResponseSet& set,
                       const std::filesystem::path& path);

// Loads every *.jsonl file in `dir` (sorted by file name) as a response set
// for `dataset`. Two files naming the same model is an error.
std::vector<ResponseSet> load_response_dir(const std::filesystem::path& dir,
                                           const EvalDataset& dataset);

}  // namespace arena

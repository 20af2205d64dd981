#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "cmdp/model.hpp"
#include "cmdp/sim.hpp"
#include "cmdp/strategy.hpp"

namespace cmdp::io {

using Json = nlohmann::ordered_json;

/// Malformed JSON or a document that does not match the expected shape.
/// Line and column are 1-based and 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct ModelDocument {
  Cmdp model;
  /// All false when the document lists no targets.
  StateSet targets;
  bool has_targets = false;
};

/// Probabilities may be JSON numbers, decimal or "n/d" strings, or [n, d]
/// pairs; strings and pairs are kept exact.
ModelDocument parse_model(std::string_view text);
ModelDocument load_model(const std::filesystem::path& path);

/// Exact probabilities print as decimal strings when they terminate and as
/// [n, d] pairs otherwise.
Json model_to_json(const Cmdp& model, const StateSet* targets = nullptr);

/// {"states": {"<state>": [[level, "action"], ...]}} with every state present.
RuleSelector parse_strategy(const Cmdp& model, std::string_view text);
RuleSelector load_strategy(const Cmdp& model, const std::filesystem::path& path);
Json strategy_to_json(const Cmdp& model, const RuleSelector& selector);

/// {"<state>": value} with null for infinity.
Json levels_to_json(const Cmdp& model, const LevelVector& values);

/// hit_count, censored_count, depleted_count, episodes and mean; an all
/// censored run reports the mean as "<max_steps>+".
Json report_to_json(const ErtReport& report, std::size_t max_steps);

/// Pretty-printed with two-space indentation and a trailing newline.
std::string dump(const Json& json);

std::string read_file(const std::filesystem::path& path);

}  // namespace cmdp::io

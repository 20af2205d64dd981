#include "cmdp/io.hpp"

#include <fstream>
#include <sstream>

namespace cmdp::io {
namespace {

std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, column] = locate(text, e.byte);
    std::string what = e.what();
    // Drop the library prefix "[json.exception.parse_error.101] ".
    if (auto pos = what.find("] "); pos != std::string::npos) what = what.substr(pos + 2);
    throw ParseError(what, line, column);
  }
}

const Json& member(const Json& object, const char* key, const std::string& where) {
  if (!object.is_object()) throw ParseError(where + ": expected an object");
  auto it = object.find(key);
  if (it == object.end()) throw ParseError(where + ": missing \"" + key + "\"");
  return *it;
}

Amount integer(const Json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ParseError(where + ": expected an integer");
  return v.get<Amount>();
}

const std::string& string(const Json& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where + ": expected a string");
  return v.get_ref<const std::string&>();
}

Probability probability(const Json& v, const std::string& where) {
  try {
    if (v.is_number_integer()) return Probability(Rational(v.get<std::int64_t>()));
    if (v.is_number()) return Probability(v.get<double>());
    if (v.is_string()) return Probability(Rational::parse(v.get_ref<const std::string&>()));
    if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
      auto d = v[1].get<std::int64_t>();
      if (d == 0) throw ParseError(where + ": zero denominator");
      return Probability(Rational(v[0].get<std::int64_t>(), d));
    }
  } catch (const ProbabilityFormatError& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected a probability (number, string or [numerator, denominator])");
}

Json probability_to_json(const Probability& p) {
  if (!p.exact()) return p.value();
  if (auto dec = p.exact()->to_decimal()) return *dec;
  return Json::array({p.exact()->numerator(), p.exact()->denominator()});
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(line ? message + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                              : message),
      line_(line),
      column_(column) {}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ModelDocument parse_model(std::string_view text) {
  Json doc = parse_json(text);
  const Amount capacity = integer(member(doc, "capacity", "model"), "capacity");
  if (capacity < 0) throw ParseError("capacity: must be non-negative");
  const Json& states = member(doc, "states", "model");
  if (!states.is_array()) throw ParseError("states: expected an array");

  CmdpBuilder builder(capacity);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string where = "states[" + std::to_string(i) + "]";
    const std::string& name = string(member(states[i], "name", where), where + ".name");
    bool reload = false;
    if (auto it = states[i].find("reload"); it != states[i].end()) {
      if (!it->is_boolean()) throw ParseError(where + ".reload: expected a boolean");
      reload = it->get<bool>();
    }
    if (builder.find_state(name)) throw ParseError(where + ": duplicate state '" + name + "'");
    builder.add_state(name, reload);
  }

  for (std::size_t i = 0; i < states.size(); ++i) {
    const std::string where = "states[" + std::to_string(i) + "]";
    const Json& actions = member(states[i], "actions", where);
    if (!actions.is_array()) throw ParseError(where + ".actions: expected an array");
    const auto s = static_cast<StateId>(i);
    for (std::size_t j = 0; j < actions.size(); ++j) {
      const std::string aw = where + ".actions[" + std::to_string(j) + "]";
      const std::string& name = string(member(actions[j], "name", aw), aw + ".name");
      const Amount cons = integer(member(actions[j], "cons", aw), aw + ".cons");
      if (cons < 0) throw ParseError(aw + ".cons: must be non-negative");
      const Json& distr = member(actions[j], "distr", aw);
      if (!distr.is_array()) throw ParseError(aw + ".distr: expected an array");
      std::vector<std::pair<StateId, Probability>> entries;
      for (std::size_t k = 0; k < distr.size(); ++k) {
        const std::string dw = aw + ".distr[" + std::to_string(k) + "]";
        if (!distr[k].is_array() || distr[k].size() != 2) throw ParseError(dw + ": expected [state, probability]");
        const std::string& target = string(distr[k][0], dw);
        auto t = builder.find_state(target);
        if (!t) throw ParseError(dw + ": unknown state '" + target + "'");
        entries.emplace_back(*t, probability(distr[k][1], dw));
      }
      try {
        builder.add_action(s, name, cons, std::move(entries));
      } catch (const ModelError& e) {
        throw ParseError(aw + ": " + e.what());
      }
    }
  }

  ModelDocument out;
  out.model = builder.build();
  out.targets.assign(out.model.num_states(), false);
  if (auto it = doc.find("targets"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("targets: expected an array");
    out.has_targets = true;
    for (const Json& t : *it) {
      const std::string& name = string(t, "targets");
      auto id = out.model.find_state(name);
      if (!id) throw ParseError("targets: unknown state '" + name + "'");
      out.targets[*id] = true;
    }
  }
  return out;
}

ModelDocument load_model(const std::filesystem::path& path) { return parse_model(read_file(path)); }

Json model_to_json(const Cmdp& model, const StateSet* targets) {
  Json doc = Json::object();
  doc["capacity"] = model.capacity();
  Json states = Json::array();
  for (StateId s = 0; s < model.num_states(); ++s) {
    Json state = Json::object();
    state["name"] = model.state_name(s);
    state["reload"] = model.is_reload(s);
    Json actions = Json::array();
    for (ActionId a = 0; a < model.num_actions(s); ++a) {
      Json action = Json::object();
      action["name"] = model.action(s, a).name;
      action["cons"] = model.consumption(s, a);
      Json distr = Json::array();
      for (const Successor& succ : model.successors(s, a))
        distr.push_back(Json::array({model.state_name(succ.target), probability_to_json(succ.probability)}));
      action["distr"] = std::move(distr);
      actions.push_back(std::move(action));
    }
    state["actions"] = std::move(actions);
    states.push_back(std::move(state));
  }
  doc["states"] = std::move(states);
  if (targets) {
    Json list = Json::array();
    for (StateId s = 0; s < model.num_states(); ++s)
      if ((*targets)[s]) list.push_back(model.state_name(s));
    doc["targets"] = std::move(list);
  }
  return doc;
}

RuleSelector parse_strategy(const Cmdp& model, std::string_view text) {
  Json doc = parse_json(text);
  const Json& states = member(doc, "states", "strategy");
  if (!states.is_object()) throw ParseError("states: expected an object");
  RuleSelector selector(model.num_states());
  for (const auto& [name, rule] : states.items()) {
    auto s = model.find_state(name);
    if (!s) throw ParseError("states: unknown state '" + name + "'");
    if (!rule.is_array()) throw ParseError("states." + name + ": expected an array");
    Amount previous = -1;
    for (const Json& entry : rule) {
      const std::string where = "states." + name;
      if (!entry.is_array() || entry.size() != 2) throw ParseError(where + ": expected [level, action]");
      Amount level = integer(entry[0], where);
      if (level <= previous) throw ParseError(where + ": border levels must be strictly increasing");
      previous = level;
      const std::string& action = string(entry[1], where);
      auto a = model.find_action(*s, action);
      if (!a) throw ParseError(where + ": unknown action '" + action + "'");
      try {
        selector.insert(model, *s, level, *a);
      } catch (const ModelError& e) {
        throw ParseError(where + ": " + e.what());
      }
    }
  }
  return selector;
}

RuleSelector load_strategy(const Cmdp& model, const std::filesystem::path& path) {
  return parse_strategy(model, read_file(path));
}

Json strategy_to_json(const Cmdp& model, const RuleSelector& selector) {
  Json states = Json::object();
  for (StateId s = 0; s < model.num_states(); ++s) {
    Json rule = Json::array();
    for (const auto& [level, action] : selector.rule(s).borders())
      rule.push_back(Json::array({level, model.action(s, action).name}));
    states[model.state_name(s)] = std::move(rule);
  }
  Json doc = Json::object();
  doc["states"] = std::move(states);
  return doc;
}

Json levels_to_json(const Cmdp& model, const LevelVector& values) {
  Json out = Json::object();
  for (StateId s = 0; s < model.num_states(); ++s)
    out[model.state_name(s)] = values[s].is_finite() ? Json(values[s].value()) : Json(nullptr);
  return out;
}

Json report_to_json(const ErtReport& report, std::size_t max_steps) {
  Json out = Json::object();
  out["episodes"] = report.episodes;
  out["hit_count"] = report.hit_count;
  out["censored_count"] = report.censored_count;
  out["depleted_count"] = report.depleted_count;
  if (report.mean)
    out["mean"] = *report.mean;
  else
    out["mean"] = std::to_string(max_steps) + "+";
  return out;
}

std::string dump(const Json& json) { return json.dump(2) + "\n"; }

}  // namespace cmdp::io

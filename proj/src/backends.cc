#include "sharedword/backends.h"

#include <charconv>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sharedword/adapter.h"
#include "sharedword/errors.h"

namespace sharedword {

namespace {

struct SplitSpec {
  std::string_view family;
  std::string_view kind;
  std::string_view argument;
  bool has_argument = false;
};

// "family:kind[:argument]", where the argument keeps any further colons.
SplitSpec split_spec(std::string_view spec) {
  SplitSpec out;
  const auto first = spec.find(':');
  if (first == std::string_view::npos) {
    throw ConfigError("malformed backend spec '" + std::string(spec) + "'");
  }
  out.family = spec.substr(0, first);
  const std::string_view rest = spec.substr(first + 1);
  const auto second = rest.find(':');
  out.kind = rest.substr(0, second);
  if (second != std::string_view::npos) {
    out.argument = rest.substr(second + 1);
    out.has_argument = true;
  }
  return out;
}

double parse_double(std::string_view text, std::string_view what) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ConfigError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::string_view require_argument(const SplitSpec& spec, std::string_view full) {
  if (!spec.has_argument || spec.argument.empty()) {
    throw ConfigError("backend spec '" + std::string(full) + "' needs an argument");
  }
  return spec.argument;
}

std::unique_ptr<LineTransport> adapter_transport(const SplitSpec& spec,
                                                 std::string_view full) {
  if (spec.kind != "socket" && spec.kind != "pipe") {
    throw ConfigError("unknown adapter transport in '" + std::string(full) + "'");
  }
  return make_transport(spec.kind, require_argument(spec, full));
}

}  // namespace

OverlapParams parse_overlap_params(std::string_view text) {
  OverlapParams params;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    text = comma == std::string_view::npos ? std::string_view{}
                                           : text.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("overlap parameter '" + std::string(item) +
                        "' is not KEY=VALUE");
    }
    const std::string_view key = item.substr(0, eq);
    const std::string_view value = item.substr(eq + 1);
    if (key == "threshold") {
      params.threshold = parse_double(value, "threshold");
    } else if (key == "sharpness") {
      params.sharpness = parse_double(value, "sharpness");
    } else {
      throw ConfigError("unknown overlap parameter '" + std::string(key) + "'");
    }
  }
  return params;
}

std::unique_ptr<TargetModel> make_target_model(std::string_view spec) {
  const SplitSpec parts = split_spec(spec);
  if (parts.family == "toy") {
    if (parts.kind == "overlap") {
      return std::make_unique<OverlapModel>(parse_overlap_params(parts.argument));
    }
    if (parts.kind == "bow") {
      return std::make_unique<BowLogisticModel>(
          BowLogisticModel::load(std::string(require_argument(parts, spec))));
    }
  } else if (parts.family == "adapter") {
    return std::make_unique<AdapterModel>(adapter_transport(parts, spec),
                                          std::string(spec));
  }
  throw ConfigError("unknown model spec '" + std::string(spec) + "'");
}

std::unique_ptr<MaskedLanguageModel> make_language_model(std::string_view spec) {
  const SplitSpec parts = split_spec(spec);
  if (parts.family == "toy") {
    if (parts.kind == "table") {
      return std::make_unique<TableLm>(
          TableLm::load(std::string(require_argument(parts, spec))));
    }
    if (parts.kind == "uniform") {
      std::vector<std::string> words;
      std::string_view rest = require_argument(parts, spec);
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto word = rest.substr(0, comma);
        if (word.empty()) {
          throw ConfigError("empty word in LM spec '" + std::string(spec) + "'");
        }
        words.emplace_back(word);
        rest = comma == std::string_view::npos ? std::string_view{}
                                               : rest.substr(comma + 1);
      }
      if (words.empty()) throw ConfigError("toy:uniform needs at least one word");
      return std::make_unique<TableLm>(std::move(words));
    }
  } else if (parts.family == "adapter") {
    return std::make_unique<AdapterLm>(adapter_transport(parts, spec));
  }
  throw ConfigError("unknown LM spec '" + std::string(spec) + "'");
}

}  // namespace sharedword

#pragma once

// Backend SPEC strings, one flat string per model:
//
//   target models                         masked LMs
//   toy:overlap[:threshold=T,sharpness=S]  toy:table:PATH
//   toy:bow:CHECKPOINT                     toy:uniform:WORD,WORD,...
//   adapter:socket:ADDR                    adapter:socket:ADDR
//   adapter:pipe:COMMAND                   adapter:pipe:COMMAND

#include <memory>
#include <string_view>

#include "sharedword/maskedlm.h"
#include "sharedword/target.h"

namespace sharedword {

// "threshold=0.5,sharpness=10"; either key may be omitted, sharpness may be
// "inf". Throws ConfigError.
OverlapParams parse_overlap_params(std::string_view text);

// Throw ConfigError on unknown or malformed specs and DataError when a
// referenced file cannot be loaded.
std::unique_ptr<TargetModel> make_target_model(std::string_view spec);
std::unique_ptr<MaskedLanguageModel> make_language_model(std::string_view spec);

}  // namespace sharedword

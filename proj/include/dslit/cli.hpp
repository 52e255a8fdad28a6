#pragma once

#include <string>
#include <vector>

namespace dslit::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 2;
inline constexpr int kNumericalError = 3;
inline constexpr int kAcceptanceFailure = 4;

// args[0] is the program name. Subcommands: idt-response, mirror, crossings,
// numbersplit, fit <model> <dataset.csv>, papercheck. Global flags --config,
// --out, --seed, --svg. Without --config the built-in reference document is used.
int run(const std::vector<std::string>& args);

}  // namespace dslit::cli

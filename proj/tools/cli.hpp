#pragma once

namespace inkwarp::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kIoError = 1;
inline constexpr int kSpecError = 2; // transform text, parameters, or command-line usage
inline constexpr int kPlanError = 3; // dataset or chain config, missing stages
inline constexpr int kEmpty = 4;
inline constexpr int kCurationError = 5;
inline constexpr int kSpawnError = 6;

int run(int argc, char** argv);

} // namespace inkwarp::cli

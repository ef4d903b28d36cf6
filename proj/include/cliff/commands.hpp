#pragma once

#include <filesystem>
#include <string>

#include "cliff/error.hpp"
#include "cliff/job.hpp"

namespace cliff {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitResidual = 1;  // ran, but a residual is above its tolerance
inline constexpr int kExitError = 2;     // a module error; JSON object on stderr

struct CommandOutput {
  Json report;
  int exit_code = kExitOk;
};

// Runs job.command (check, intertwine, connection, transport, solve). The
// report echoes the resolved job; artifacts go to job.out when set.
CommandOutput run_job(const JobSpec& job);

// Directory holding fixtures/; CLIFF_DATA_DIR in the environment overrides
// the build-time default.
std::filesystem::path data_dir();

// The shipped fixture for example 1..4.
JobSpec example_job(int which);

Json error_to_json(const Error& e);

}  // namespace cliff

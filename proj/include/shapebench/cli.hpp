/**
 * @file cli.hpp
 * @brief `shapebench` command-line front end.
 *
 * Sub-commands: align, split, perturb, denoise, train-eigen, evaluate, report.
 * run() never calls exit(); it returns 0 on success and a nonzero code with a
 * diagnostic on `err` otherwise, so tests can drive it in-process.
 */
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace shapebench::cli {

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace shapebench::cli

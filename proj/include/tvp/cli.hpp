#pragma once

#include <string>
#include <vector>

namespace tvp::cli {

// Command implementations behind the `tvp` executable.  Each returns a
// process exit code: 0 on success, 1 on failed checks or aborted runs, and
// throws std::exception subclasses for unusable inputs (mapped to exit code
// 2 by the entry point).

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            bool serial);

int cmd_sweep(const std::string& scenario_path, const std::vector<double>& lambdas,
              const std::string& out_dir, bool serial);

int cmd_check(const std::string& scenario_path, bool serial);

int cmd_oracle(const std::string& scenario_path, const std::string& out_dir,
               bool compare, int n_halvings, const std::vector<double>& lambdas,
               bool serial);

int cmd_lifting(const std::string& scenario_path, const std::string& out_dir);

}  // namespace tvp::cli

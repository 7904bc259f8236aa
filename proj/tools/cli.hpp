#pragma once

namespace ffharm {

// Full command-line surface. Returns the process exit code: 0 on success,
// 1 on any validation or usage problem, 2 when a verification suite ran and
// failed.
int run_cli(int argc, char** argv);

}  // namespace ffharm

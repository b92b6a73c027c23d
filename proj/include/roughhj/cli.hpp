#pragma once

namespace roughhj {

// Entry point of the command-line tool; exposed for direct testing.
// Exit codes: 0 all verdicts pass, 1 a verdict failed, 2 configuration error.
int cli_main(int argc, const char* const* argv);

}  // namespace roughhj

#pragma once

namespace tnmpcqep {

// Serial is the reference path kept for testing; OpenMP is the default.
enum class Backend { Serial, OpenMP };

}  // namespace tnmpcqep

#include "mcrmhmc/ad.hpp"

namespace mcrmhmc::ad {

namespace {
thread_local Tape* g_active = nullptr;
}

Tape* active_tape() { return g_active; }
void set_active_tape(Tape* t) { g_active = t; }

}  // namespace mcrmhmc::ad

#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qwalk/analysis.hpp"
#include "qwalk/channel.hpp"

namespace qwalk {

/// Shortest round-trip form limited to 12 significant digits; independent of
/// the global locale.
std::string format_number(double value);

/// Header `<variable>,<strategy>,bits,error`: the strategy column is the
/// normalized I_AE, `bits` the raw value. Failed points leave both empty.
void write_sweep_csv(std::ostream& os, SweepVariable variable, MiStrategy strategy,
                     std::span<const SweepRecord> records);
Json sweep_to_json(SweepVariable variable, MiStrategy strategy, std::span<const SweepRecord> records);

/// Figure table: `<variable>,ir2,ir1,lm05` using normalized values. Both
/// record lists must follow the same grid.
void write_figure_csv(std::ostream& os, SweepVariable variable, std::span<const SweepRecord> ir2,
                      std::span<const SweepRecord> ir1);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view data);

}  // namespace qwalk

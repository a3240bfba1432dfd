#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dwlab/game.hpp"

namespace dwlab {

enum class Outcome { CopsWin, RobberWins };
enum class RobberWinReason { None, InfinitePlayCycle, IllegalMonotonicity, CopsStuck };

std::string_view reason_name(RobberWinReason r);

/// Alternating cop and robber positions. The first entry is the placeholder.
struct PlayRecord {
  using Entry = std::variant<CopPosition, RobberPosition>;
  std::vector<Entry> entries;
  Outcome outcome = Outcome::CopsWin;
  RobberWinReason reason = RobberWinReason::None;
  /// Set when the play was cut short (interactive EOF).
  bool aborted = false;

  int rounds() const;
  nlohmann::json to_json() const;
  std::string transcript(const Digraph& g) const;
};

struct SimulationOptions {
  Mode mode = Mode::Monotone;
  std::uint64_t max_positions = 50'000'000;
};

/// One play between two fixed strategies.
PlayRecord simulate(const Digraph& g, const CopStrategy& cops, const RobberStrategy& robber, int k,
                    const SimulationOptions& opts = {});

/// Cop strategy checked against every robber reply (an AND-search).
struct ExhaustiveResult {
  bool cops_win = false;
  /// Losing play when the cops do not win.
  std::optional<PlayRecord> counterexample;
  /// Consistent cop positions (placeholder excluded) with the maximal number
  /// of rounds the robber can still survive from there. Only filled on a win.
  std::unordered_map<CopPosition, int, CopPositionHash> rounds_left;
  /// Longest consistent play in rounds, counted from the placeholder.
  int longest_play = 0;
};

ExhaustiveResult simulate_exhaustive(const Digraph& g, const CopStrategy& cops, int k,
                                     const SimulationOptions& opts = {});

/// Distinct cop positions (C, R) with R a real robber component met in plays
/// where the cops follow `cops`. Throws InputError if the strategy loses.
std::uint64_t count_consistent_positions(const Digraph& g, const CopStrategy& cops, int k);

/// Those positions, sorted by cops then robber.
std::vector<CopPosition> consistent_positions(const Digraph& g, const CopStrategy& cops, int k);

/// Whether a fixed robber strategy survives every monotone cop play with k
/// cops. Cop moves are searched exhaustively (pruned moves only, which loses
/// nothing). On failure, a capturing play is returned.
struct RobberCheck {
  bool robber_survives = false;
  std::optional<PlayRecord> capture;
  std::uint64_t positions = 0;
};
RobberCheck verify_robber_strategy(const Digraph& g, const RobberStrategy& robber, int k,
                                   std::uint64_t max_positions = 50'000'000);

/// Plain-text game loop. The human side types vertex names separated by
/// spaces (cops) or the name of one vertex of the chosen component (robber).
enum class Side { Cops, Robber };
PlayRecord interactive_play(const Digraph& g, int k, Side human, const CopStrategy* machine_cops,
                            const RobberStrategy* machine_robber, std::istream& in, std::ostream& out,
                            Mode mode = Mode::Monotone);

}  // namespace dwlab

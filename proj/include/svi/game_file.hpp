#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "svi/experiments.hpp"
#include "svi/operators.hpp"

namespace svi {

inline constexpr int kGameFormatVersion = 1;

struct GameDocument {
  std::shared_ptr<const QuadraticGame> game;
  std::optional<GameGenConfig> generator;  // present for generated games
};

/// JSON text with format_version, n, d1, d2, seed, generator parameters and
/// row-major arrays A, B, C, a, c per component. Reals use the shortest
/// decimal that reads back to the same double.
std::string game_to_json(const QuadraticGame& game, const std::optional<GameGenConfig>& generator = std::nullopt);

/// Throws ParseError, or the game's own validation errors.
GameDocument game_from_json(const std::string& text);

void write_game(const std::filesystem::path& path, const QuadraticGame& game,
                const std::optional<GameGenConfig>& generator = std::nullopt);
GameDocument read_game(const std::filesystem::path& path);

}  // namespace svi

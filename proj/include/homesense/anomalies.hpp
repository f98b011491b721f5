#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "homesense/activity.hpp"
#include "homesense/floor_plan.hpp"
#include "homesense/mmse.hpp"
#include "homesense/rng.hpp"
#include "homesense/walk.hpp"

namespace homesense {

enum class AnomalyKind { SemiBedridden, Housebound, Forgetting, Wandering, FallWalking, FallStanding };

inline constexpr std::array<AnomalyKind, 6> kAllAnomalyKinds = {
    AnomalyKind::SemiBedridden, AnomalyKind::Housebound, AnomalyKind::Forgetting,
    AnomalyKind::Wandering,     AnomalyKind::FallWalking, AnomalyKind::FallStanding};

const char* to_string(AnomalyKind kind);
AnomalyKind anomaly_kind_from_string(const std::string& name);

struct AnomalyEpisode {
  AnomalyKind kind = AnomalyKind::Wandering;
  Tick start = 0;
  Tick end = 0;
  friend bool operator==(const AnomalyEpisode&, const AnomalyEpisode&) = default;
};

struct AnomalyParams {
  double rate_scale = 1.0;
  std::array<bool, 6> enabled = {true, true, true, true, true, true};
  std::array<std::optional<double>, 6> rate_override{};  // per month, replaces the MMSE law
  double semi_bedridden_mean_days = 30.0;
  double housebound_mean_days = 14.0;
  int weeks_min_days = 7;            // shortest weeks-scale episode
  double bed_fall_probability = 0.5;
  double forgetting_return_radius = 1.0;
  double wandering_max_pause_s = 1.0;
  double fall_mean_s = 30.0;

  bool is_enabled(AnomalyKind k) const { return enabled[static_cast<int>(k)]; }
};

// Expected occurrences per month at MMSE value m, clamped at zero.
double monthly_rate(AnomalyKind kind, double mmse);

// Nominal episodes: weeks-scale spans are final, wandering/fall spans fix the duration but
// are realized at the next suitable moment, forgetting spans only mark the month.
std::vector<AnomalyEpisode> sample_episodes(AnomalyKind kind, const MmseTrajectory& mmse, int months, Rng& rng,
                                            const AnomalyParams& params = {},
                                            std::span<const AnomalyEpisode> exclude = {});

StatModifiers stat_modifiers_for(AnomalyKind kind, const AnomalyEpisode& episode);

// Chain of walks between random anchors lasting exactly the episode duration.
std::vector<TrajectoryPiece> inject_wandering(const AnomalyEpisode& episode, const FloorPlan& plan, Point origin,
                                              double speed_cm_s, Rng& rng, double max_pause_s = 1.0);

struct FallInjection {
  std::vector<TrajectoryPiece> pieces;
  AnomalyEpisode episode;
};

// FallWalking falls at a random interior tick; FallStanding at the walk origin, or at its end
// when `at_destination` (the bed case).
FallInjection inject_fall(AnomalyKind kind, const WalkSegment& walk, Tick immobile_duration, Rng& rng,
                          bool at_destination = false);

// First tick after `from` at which the resident, having been farther than `radius` from
// `anchor`, comes back within it. Pieces must be time-ordered.
std::optional<Tick> find_return_time(std::span<const TrajectoryPiece> pieces, Tick from, Point anchor, double radius);

struct ForgettingInjection {
  std::size_t activity_index = 0;  // appliance activity left running
  Tick switch_off = 0;             // extended end of its appliance window
  AnomalyEpisode episode;
};

// Picks a random appliance activity starting in [window_start, window_end) that is not yet
// `taken`, and keeps its appliance on until the resident returns near its anchor (or `horizon`).
std::optional<ForgettingInjection> inject_forgetting(std::span<const ActivityInstance> activities,
                                                     std::span<const TrajectoryPiece> pieces, const FloorPlan& plan,
                                                     Tick window_start, Tick window_end, Tick horizon, Rng& rng,
                                                     std::vector<char>& taken, double radius = 1.0);

}  // namespace homesense

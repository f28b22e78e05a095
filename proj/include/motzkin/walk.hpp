#ifndef MOTZKIN_WALK_HPP
#define MOTZKIN_WALK_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace motzkin {

enum class StepKind : std::uint8_t { Up, Flat, Down };

/// One site of the chain. Flat steps carry color 0; Up/Down carry 1..s.
struct StepLabel {
  StepKind kind = StepKind::Flat;
  int color = 0;

  static constexpr StepLabel up(int c) { return {StepKind::Up, c}; }
  static constexpr StepLabel flat() { return {StepKind::Flat, 0}; }
  static constexpr StepLabel down(int c) { return {StepKind::Down, c}; }

  int height_delta() const { return kind == StepKind::Up ? 1 : (kind == StepKind::Down ? -1 : 0); }

  // Up<Flat<Down, then ascending color.
  friend auto operator<=>(const StepLabel&, const StepLabel&) = default;
};

/// Local basis index of a site in 0..2s: u^1..u^s, 0, d^1..d^s.
int site_code(StepLabel label, int s);
StepLabel site_label(int code, int s);

/// A validated s-colored Motzkin walk. Construct through validate().
class Walk {
 public:
  const std::vector<StepLabel>& steps() const { return steps_; }
  /// h_0..h_{2n}
  const std::vector<int>& heights() const { return heights_; }
  std::int64_t area() const { return area_; }
  int length() const { return static_cast<int>(steps_.size()); }
  int half_length() const { return length() / 2; }

  /// Base-(2s+1) packing of the site codes; unique per walk for a fixed s.
  std::uint64_t key(int s) const;

  friend bool operator==(const Walk& a, const Walk& b) { return a.steps_ == b.steps_; }
  friend auto operator<=>(const Walk& a, const Walk& b) { return a.steps_ <=> b.steps_; }

 private:
  friend Walk validate(std::span<const StepLabel> steps, int s);
  std::vector<StepLabel> steps_;
  std::vector<int> heights_;
  std::int64_t area_ = 0;
};

/// Checks the Motzkin and color-matching constraints and computes heights and area.
/// Throws MotzkinError (OddLength, InvalidColor, NegativeHeight, ColorMismatch,
/// NonzeroEndpoint).
Walk validate(std::span<const StepLabel> steps, int s);

/// Area under a height profile, from the doubled trapezoid sum.
std::int64_t area(const Walk& walk);
std::int64_t area_from_heights(std::span<const int> heights);

/// Text form: tokens "u<k>", "0", "d<k>" joined by '.', e.g. "u1.0.d1".
std::vector<StepLabel> parse_steps(std::string_view text);
Walk parse_walk(std::string_view text, int s);
std::string format_walk(const Walk& walk);
std::string format_steps(std::span<const StepLabel> steps);

/// Recolors every non-flat step with i -> s - i + 1.
Walk color_flip(const Walk& walk, int s);

/// True iff h_1..h_{2n-1} are all positive.
bool is_prime(const Walk& walk);

/// One local move out of a walk: the bond is the 1-based site j of the pair (j, j+1).
struct LocalMove {
  int bond = 0;
  int delta_area = 0;
  Walk target;
};

/// All neighbors under 0u<->u0, 0d<->d0 and 00<->u^k d^k, in bond order.
std::vector<LocalMove> local_moves(const Walk& walk, int s);

/// Concatenation of two complete walks (area is additive).
Walk concatenate(const Walk& left, const Walk& right, int s);

}  // namespace motzkin

#endif  // MOTZKIN_WALK_HPP

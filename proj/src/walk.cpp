#include "motzkin/walk.hpp"

#include <cassert>
#include <charconv>
#include <cmath>

#include "motzkin/errors.hpp"

namespace motzkin {

int site_code(StepLabel label, int s) {
  switch (label.kind) {
    case StepKind::Up: return label.color - 1;
    case StepKind::Flat: return s;
    case StepKind::Down: return s + label.color;
  }
  return s;
}

StepLabel site_label(int code, int s) {
  if (code < s) return StepLabel::up(code + 1);
  if (code == s) return StepLabel::flat();
  return StepLabel::down(code - s);
}

std::uint64_t Walk::key(int s) const {
  const double bits = static_cast<double>(steps_.size()) * std::log2(2.0 * s + 1.0);
  if (bits >= 63.0) {
    throw MotzkinError(ErrorKind::SizeLimitExceeded, "walk too long for a 64-bit key");
  }
  const std::uint64_t base = 2 * static_cast<std::uint64_t>(s) + 1;
  std::uint64_t k = 0;
  for (const auto& step : steps_) k = k * base + static_cast<std::uint64_t>(site_code(step, s));
  return k;
}

std::int64_t area_from_heights(std::span<const int> heights) {
  std::int64_t doubled = 0;
  for (std::size_t j = 1; j < heights.size(); ++j) doubled += heights[j - 1] + heights[j];
  assert(doubled % 2 == 0 && "doubled area of a closed walk is even");
  return doubled / 2;
}

std::int64_t area(const Walk& walk) { return area_from_heights(walk.heights()); }

Walk validate(std::span<const StepLabel> steps, int s) {
  if (steps.empty() || steps.size() % 2 != 0) {
    throw MotzkinError(ErrorKind::OddLength,
                       "walk length must be even and >= 2, got " + std::to_string(steps.size()));
  }
  Walk walk;
  walk.steps_.assign(steps.begin(), steps.end());
  walk.heights_.reserve(steps.size() + 1);
  walk.heights_.push_back(0);

  std::vector<int> open;  // colors of unmatched up steps
  for (std::size_t j = 0; j < steps.size(); ++j) {
    const auto& step = steps[j];
    const auto pos = std::to_string(j + 1);
    if (step.kind == StepKind::Flat) {
      if (step.color != 0) throw MotzkinError(ErrorKind::InvalidColor, "flat step with a color at " + pos);
    } else if (step.color < 1 || step.color > s) {
      throw MotzkinError(ErrorKind::InvalidColor, "color " + std::to_string(step.color) +
                                                      " outside 1.." + std::to_string(s) + " at " + pos);
    }
    if (step.kind == StepKind::Up) {
      open.push_back(step.color);
    } else if (step.kind == StepKind::Down) {
      if (open.empty()) throw MotzkinError(ErrorKind::NegativeHeight, "walk goes below zero at " + pos);
      if (open.back() != step.color) {
        throw MotzkinError(ErrorKind::ColorMismatch,
                           "down step d" + std::to_string(step.color) + " at " + pos +
                               " closes u" + std::to_string(open.back()));
      }
      open.pop_back();
    }
    walk.heights_.push_back(static_cast<int>(open.size()));
  }
  if (!open.empty()) {
    throw MotzkinError(ErrorKind::NonzeroEndpoint, "walk ends at height " + std::to_string(open.size()));
  }
  walk.area_ = area_from_heights(walk.heights_);
  return walk;
}

std::vector<StepLabel> parse_steps(std::string_view text) {
  std::vector<StepLabel> steps;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto dot = text.find('.', start);
    const auto token = text.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    if (token == "0") {
      steps.push_back(StepLabel::flat());
    } else if (token.size() >= 2 && (token[0] == 'u' || token[0] == 'd')) {
      int color = 0;
      const auto* first = token.data() + 1;
      const auto* last = token.data() + token.size();
      auto [ptr, ec] = std::from_chars(first, last, color);
      if (ec != std::errc{} || ptr != last) {
        throw MotzkinError(ErrorKind::ParseError, "bad color in token '" + std::string(token) + "'");
      }
      steps.push_back(token[0] == 'u' ? StepLabel::up(color) : StepLabel::down(color));
    } else {
      throw MotzkinError(ErrorKind::ParseError, "bad token '" + std::string(token) + "'");
    }
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return steps;
}

Walk parse_walk(std::string_view text, int s) { return validate(parse_steps(text), s); }

std::string format_steps(std::span<const StepLabel> steps) {
  std::string out;
  for (std::size_t j = 0; j < steps.size(); ++j) {
    if (j) out += '.';
    switch (steps[j].kind) {
      case StepKind::Up: out += 'u' + std::to_string(steps[j].color); break;
      case StepKind::Flat: out += '0'; break;
      case StepKind::Down: out += 'd' + std::to_string(steps[j].color); break;
    }
  }
  return out;
}

std::string format_walk(const Walk& walk) { return format_steps(walk.steps()); }

Walk color_flip(const Walk& walk, int s) {
  std::vector<StepLabel> steps = walk.steps();
  for (auto& step : steps) {
    if (step.kind != StepKind::Flat) step.color = s - step.color + 1;
  }
  return validate(steps, s);
}

bool is_prime(const Walk& walk) {
  const auto& h = walk.heights();
  for (std::size_t j = 1; j + 1 < h.size(); ++j) {
    if (h[j] <= 0) return false;
  }
  return true;
}

std::vector<LocalMove> local_moves(const Walk& walk, int s) {
  std::vector<LocalMove> moves;
  const auto& steps = walk.steps();
  std::vector<StepLabel> buf = steps;
  auto emit = [&](std::size_t j, StepLabel a, StepLabel b, int delta) {
    buf[j] = a;
    buf[j + 1] = b;
    moves.push_back({static_cast<int>(j + 1), delta, validate(buf, s)});
    buf[j] = steps[j];
    buf[j + 1] = steps[j + 1];
  };
  for (std::size_t j = 0; j + 1 < steps.size(); ++j) {
    const StepLabel a = steps[j];
    const StepLabel b = steps[j + 1];
    using enum StepKind;
    if (a.kind == Flat && b.kind == Flat) {
      for (int k = 1; k <= s; ++k) emit(j, StepLabel::up(k), StepLabel::down(k), +1);
    } else if (a.kind == Up && b.kind == Down) {
      emit(j, StepLabel::flat(), StepLabel::flat(), -1);
    } else if (a.kind == Flat && b.kind == Up) {
      emit(j, b, a, +1);
    } else if (a.kind == Up && b.kind == Flat) {
      emit(j, b, a, -1);
    } else if (a.kind == Flat && b.kind == Down) {
      emit(j, b, a, -1);
    } else if (a.kind == Down && b.kind == Flat) {
      emit(j, b, a, +1);
    }
  }
  return moves;
}

Walk concatenate(const Walk& left, const Walk& right, int s) {
  std::vector<StepLabel> steps = left.steps();
  steps.insert(steps.end(), right.steps().begin(), right.steps().end());
  return validate(steps, s);
}

}  // namespace motzkin

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "elearn/clock.hpp"
#include "elearn/persistence.hpp"

namespace elearn {

inline constexpr int kMinRating = 1;
inline constexpr int kMaxRating = 5;
inline constexpr std::size_t kMaxCommentChars = 2000;

struct FeedbackRecord {
  std::string student_id;
  int attempt = 1;
  int rating = 0;
  std::string comments;
  std::int64_t submitted_at = 0;

  bool operator==(const FeedbackRecord&) const = default;
};

void to_json(Json& j, const FeedbackRecord& f);
void from_json(const Json& j, FeedbackRecord& f);

// Counts UTF-8 code points, not bytes.
std::size_t utf8_length(const std::string& text);

class FeedbackDesk {
 public:
  explicit FeedbackDesk(RepositorySet& repos, Clock clock = system_now_ms)
      : repos_(repos), clock_(std::move(clock)) {}

  FeedbackRecord submit_feedback(const std::string& student_id, int rating,
                                 const std::string& comments);
  std::vector<FeedbackRecord> all() const;

 private:
  RepositorySet& repos_;
  Clock clock_;
};

}  // namespace elearn

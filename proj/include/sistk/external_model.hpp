#pragma once

#include <condition_variable>
#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "sistk/evaluator.hpp"

namespace sistk {

struct ExternalModelConfig {
  std::vector<std::string> command;
  int protocol_version = 1;
  std::size_t max_in_flight = 1;
};

/// Scores batches through a child process speaking newline-delimited JSON:
/// a {"hello": <version>} / {"ready": <version>} handshake, then requests
/// {"id": <int>, "inputs": [[[f64,...],...],...]} answered (possibly out of
/// order) by {"id": <int>, "outputs": [f64,...]}. Any malformed line aborts
/// the run with the offending text. Up to max_in_flight requests may be
/// pending concurrently.
class ExternalModel : public Evaluator {
 public:
  explicit ExternalModel(ExternalModelConfig config);
  ~ExternalModel() override;

  ExternalModel(const ExternalModel&) = delete;
  ExternalModel& operator=(const ExternalModel&) = delete;

  std::vector<double> evaluate(
      const std::vector<FeatureInput>& batch) const override;

 private:
  void send_line(const std::string& line) const;
  std::string read_line() const;  // caller must hold the reader role
  void fail(const std::string& message) const;

  ExternalModelConfig config_;
  int child_pid_ = -1;
  int write_fd_ = -1;
  int read_fd_ = -1;
  mutable std::string read_buffer_;

  mutable std::mutex mu_;
  mutable std::condition_variable cv_;
  mutable bool reader_active_ = false;
  mutable std::size_t in_flight_ = 0;
  mutable std::uint64_t next_id_ = 0;
  mutable std::map<std::uint64_t, std::vector<double>> ready_;
  mutable std::string error_;
};

}  // namespace sistk

#include "sistk/external_model.hpp"

#include <csignal>
#include <cstring>
#include <stdexcept>

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

namespace sistk {

namespace {

[[noreturn]] void throw_errno(const std::string& what) {
  throw std::runtime_error(what + ": " + std::strerror(errno));
}

}  // namespace

ExternalModel::ExternalModel(ExternalModelConfig config)
    : config_(std::move(config)) {
  if (config_.command.empty())
    throw std::invalid_argument("external model: empty command");
  if (config_.max_in_flight < 1)
    throw std::invalid_argument("external model: max_in_flight must be >= 1");

  // A dead child turns writes into EPIPE instead of killing the process.
  std::signal(SIGPIPE, SIG_IGN);

  int to_child[2], from_child[2];
  if (pipe(to_child) != 0) throw_errno("external model: pipe");
  if (pipe(from_child) != 0) throw_errno("external model: pipe");

  const pid_t pid = fork();
  if (pid < 0) throw_errno("external model: fork");
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    std::vector<char*> argv;
    argv.reserve(config_.command.size() + 1);
    for (auto& arg : config_.command) argv.push_back(arg.data());
    argv.push_back(nullptr);
    execvp(argv[0], argv.data());
    _exit(127);
  }
  child_pid_ = pid;
  write_fd_ = to_child[1];
  read_fd_ = from_child[0];
  close(to_child[0]);
  close(from_child[1]);

  try {
    send_line(nlohmann::json{{"hello", config_.protocol_version}}.dump());
    const std::string line = read_line();
    nlohmann::json ready;
    try {
      ready = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw std::runtime_error("external model: malformed handshake line: " +
                               line);
    }
    if (!ready.contains("ready") || !ready["ready"].is_number_integer() ||
        ready["ready"].get<int>() != config_.protocol_version)
      throw std::runtime_error("external model: unexpected handshake reply: " +
                               line);
  } catch (...) {
    // The destructor does not run for a throwing constructor; close the
    // pipes (EOF stops the child) and reap it here.
    close(write_fd_);
    close(read_fd_);
    write_fd_ = read_fd_ = -1;
    int status = 0;
    waitpid(child_pid_, &status, 0);
    child_pid_ = -1;
    throw;
  }
}

ExternalModel::~ExternalModel() {
  if (write_fd_ >= 0) close(write_fd_);
  if (read_fd_ >= 0) close(read_fd_);
  if (child_pid_ > 0) {
    int status = 0;
    waitpid(child_pid_, &status, 0);
  }
}

void ExternalModel::send_line(const std::string& line) const {
  std::string payload = line;
  payload += '\n';
  std::size_t written = 0;
  while (written < payload.size()) {
    const ssize_t n =
        write(write_fd_, payload.data() + written, payload.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("external model: write to child failed");
    }
    written += static_cast<std::size_t>(n);
  }
}

std::string ExternalModel::read_line() const {
  for (;;) {
    const std::size_t nl = read_buffer_.find('\n');
    if (nl != std::string::npos) {
      std::string line = read_buffer_.substr(0, nl);
      read_buffer_.erase(0, nl + 1);
      return line;
    }
    char chunk[4096];
    const ssize_t n = read(read_fd_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw_errno("external model: read from child failed");
    }
    if (n == 0)
      throw std::runtime_error("external model: child closed its output");
    read_buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void ExternalModel::fail(const std::string& message) const {
  std::lock_guard<std::mutex> lk(mu_);
  if (error_.empty()) error_ = message;
  cv_.notify_all();
}

std::vector<double> ExternalModel::evaluate(
    const std::vector<FeatureInput>& batch) const {
  std::uint64_t id = 0;
  {
    std::unique_lock<std::mutex> lk(mu_);
    cv_.wait(lk, [&] {
      return !error_.empty() || in_flight_ < config_.max_in_flight;
    });
    if (!error_.empty()) throw std::runtime_error(error_);
    ++in_flight_;
    id = next_id_++;
  }

  nlohmann::json request;
  request["id"] = id;
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& x : batch) inputs.push_back(x.features);
  request["inputs"] = std::move(inputs);
  try {
    send_line(request.dump());
  } catch (const std::exception& e) {
    fail(e.what());
  }

  // Wait for our id; whoever finds the response slot empty becomes the
  // reader and files responses (ours or other callers') by id.
  std::vector<double> outputs;
  std::unique_lock<std::mutex> lk(mu_);
  for (;;) {
    if (!error_.empty()) {
      --in_flight_;
      cv_.notify_all();
      throw std::runtime_error(error_);
    }
    if (auto it = ready_.find(id); it != ready_.end()) {
      outputs = std::move(it->second);
      ready_.erase(it);
      --in_flight_;
      cv_.notify_all();
      break;
    }
    if (!reader_active_) {
      reader_active_ = true;
      lk.unlock();
      std::string line;
      std::string problem;
      std::uint64_t rid = 0;
      std::vector<double> rout;
      try {
        line = read_line();
        const nlohmann::json response = nlohmann::json::parse(line);
        if (!response.contains("id") || !response.contains("outputs"))
          throw std::runtime_error("missing id/outputs");
        rid = response.at("id").get<std::uint64_t>();
        response.at("outputs").get_to(rout);
      } catch (const std::exception& e) {
        problem = "external model: malformed response line: " + line +
                  " (" + e.what() + ")";
      }
      lk.lock();
      reader_active_ = false;
      if (!problem.empty()) {
        if (error_.empty()) error_ = problem;
      } else {
        ready_[rid] = std::move(rout);
      }
      cv_.notify_all();
    } else {
      cv_.wait(lk);
    }
  }

  if (outputs.size() != batch.size())
    throw std::runtime_error(
        "external model: response for request " + std::to_string(id) + " has " +
        std::to_string(outputs.size()) + " outputs for " +
        std::to_string(batch.size()) + " inputs");
  return outputs;
}

}  // namespace sistk

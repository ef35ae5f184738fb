// Copyright 2026 The pipedebug Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "pipedebug/executor.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "pipedebug/json_io.h"

namespace pipedebug {
namespace {

using Clock = std::chrono::steady_clock;

void IgnoreSigpipeOnce() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

class Fd {
 public:
  Fd() = default;
  explicit Fd(int fd) : fd_(fd) {}
  Fd(Fd&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
  Fd& operator=(Fd&& other) noexcept {
    if (this != &other) {
      Close();
      fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
  }
  ~Fd() { Close(); }

  int get() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  void Close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

std::pair<Fd, Fd> MakePipe() {
  int fds[2];
  if (::pipe2(fds, O_CLOEXEC) != 0) {
    throw ExecutorError(std::string("pipe: ") + std::strerror(errno));
  }
  return {Fd(fds[0]), Fd(fds[1])};
}

void SetNonBlocking(int fd) {
  ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK);
}

class SpawnAttrs {
 public:
  SpawnAttrs() {
    posix_spawn_file_actions_init(&actions_);
    posix_spawnattr_init(&attr_);
  }
  ~SpawnAttrs() {
    posix_spawn_file_actions_destroy(&actions_);
    posix_spawnattr_destroy(&attr_);
  }
  posix_spawn_file_actions_t* actions() { return &actions_; }
  posix_spawnattr_t* attr() { return &attr_; }

 private:
  posix_spawn_file_actions_t actions_;
  posix_spawnattr_t attr_;
};

struct ChildStatus {
  bool timed_out = false;
  int wait_status = 0;
  std::string out;
  std::string err;
};

ChildStatus RunChild(const std::string& command,
                     const std::vector<std::string>& env,
                     const std::string& input,
                     std::chrono::milliseconds timeout) {
  auto [in_r, in_w] = MakePipe();
  auto [out_r, out_w] = MakePipe();
  auto [err_r, err_w] = MakePipe();

  SpawnAttrs sa;
  posix_spawn_file_actions_adddup2(sa.actions(), in_r.get(), 0);
  posix_spawn_file_actions_adddup2(sa.actions(), out_w.get(), 1);
  posix_spawn_file_actions_adddup2(sa.actions(), err_w.get(), 2);
  sigset_t defaults;
  sigemptyset(&defaults);
  sigaddset(&defaults, SIGPIPE);
  sigset_t empty_mask;
  sigemptyset(&empty_mask);
  posix_spawnattr_setsigdefault(sa.attr(), &defaults);
  posix_spawnattr_setsigmask(sa.attr(), &empty_mask);
  posix_spawnattr_setpgroup(sa.attr(), 0);
  posix_spawnattr_setflags(
      sa.attr(), POSIX_SPAWN_SETPGROUP | POSIX_SPAWN_SETSIGDEF |
                     POSIX_SPAWN_SETSIGMASK);

  std::vector<char*> argv = {const_cast<char*>("/bin/sh"),
                             const_cast<char*>("-c"),
                             const_cast<char*>(command.c_str()), nullptr};
  std::vector<char*> envp;
  for (const std::string& e : env) envp.push_back(const_cast<char*>(e.c_str()));
  envp.push_back(nullptr);

  pid_t pid = 0;
  const int rc = ::posix_spawn(&pid, "/bin/sh", sa.actions(), sa.attr(),
                               argv.data(), envp.data());
  if (rc != 0) {
    throw ExecutorError(std::string("cannot spawn /bin/sh: ") +
                        std::strerror(rc));
  }
  in_r.Close();
  out_w.Close();
  err_w.Close();
  SetNonBlocking(in_w.get());
  SetNonBlocking(out_r.get());
  SetNonBlocking(err_r.get());

  ChildStatus status;
  const auto deadline = Clock::now() + timeout;
  std::size_t written = 0;
  if (input.empty()) in_w.Close();
  char buf[4096];

  while (in_w.valid() || out_r.valid() || err_r.valid()) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - Clock::now());
    if (left.count() <= 0) {
      status.timed_out = true;
      break;
    }
    pollfd fds[3];
    int n = 0;
    int in_slot = -1, out_slot = -1, err_slot = -1;
    if (in_w.valid()) {
      in_slot = n;
      fds[n++] = {in_w.get(), POLLOUT, 0};
    }
    if (out_r.valid()) {
      out_slot = n;
      fds[n++] = {out_r.get(), POLLIN, 0};
    }
    if (err_r.valid()) {
      err_slot = n;
      fds[n++] = {err_r.get(), POLLIN, 0};
    }
    const int ready = ::poll(fds, n, static_cast<int>(std::min<long long>(
                                         left.count(), 1000)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (in_slot >= 0 && fds[in_slot].revents) {
      const ssize_t w =
          ::write(in_w.get(), input.data() + written, input.size() - written);
      if (w > 0) written += static_cast<std::size_t>(w);
      if ((w < 0 && errno != EAGAIN) || written == input.size()) in_w.Close();
    }
    auto drain = [&](Fd& fd, int slot, std::string& sink) {
      if (slot < 0 || !fds[slot].revents) return;
      const ssize_t r = ::read(fd.get(), buf, sizeof(buf));
      if (r > 0) {
        sink.append(buf, static_cast<std::size_t>(r));
      } else if (r == 0 || errno != EAGAIN) {
        fd.Close();
      }
    };
    drain(out_r, out_slot, status.out);
    drain(err_r, err_slot, status.err);
  }

  // Output is closed; wait for the exit status within the same deadline.
  while (!status.timed_out) {
    const pid_t r = ::waitpid(pid, &status.wait_status, WNOHANG);
    if (r == pid) return status;
    if (r < 0 && errno != EINTR) return status;
    if (Clock::now() >= deadline) {
      status.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  ::kill(-pid, SIGKILL);
  while (::waitpid(pid, &status.wait_status, 0) < 0 && errno == EINTR) {
  }
  return status;
}

}  // namespace

Direction ParseDirection(std::string_view name) {
  if (name == "ge") return Direction::kGe;
  if (name == "le") return Direction::kLe;
  throw std::invalid_argument("direction must be \"ge\" or \"le\", got \"" +
                              std::string(name) + "\"");
}

Outcome EvaluationSpec::Evaluate(std::optional<double> score) const {
  if (!score) return Outcome::kFail;
  const bool ok =
      direction == Direction::kGe ? *score >= threshold : *score <= threshold;
  return ok ? Outcome::kSucceed : Outcome::kFail;
}

RunResult ParseChildOutput(const std::string& stdout_text,
                           const std::string& metric_key) {
  RunResult result;
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(stdout_text);
  } catch (const nlohmann::json::parse_error& e) {
    result.failure = FailureKind::kBadOutput;
    result.detail = "output is not JSON";
    return result;
  }
  if (!parsed.is_object()) {
    result.failure = FailureKind::kBadOutput;
    result.detail = "output is not a JSON object";
    return result;
  }
  auto it = parsed.find(metric_key);
  if (it == parsed.end() || !it->is_number() ||
      !std::isfinite(it->get<double>())) {
    result.failure = FailureKind::kBadOutput;
    result.detail = "output lacks numeric \"" + metric_key + "\"";
    return result;
  }
  result.score = it->get<double>();
  return result;
}

std::vector<Instance> RunBatch(Executor& executor,
                               std::span<const Configuration> configs,
                               const EvaluationSpec& eval, Budget& budget,
                               Origin origin) {
  if (configs.size() > budget.remaining()) {
    throw std::logic_error("batch of " + std::to_string(configs.size()) +
                           " runs exceeds the remaining budget of " +
                           std::to_string(budget.remaining()));
  }
  std::vector<Instance> out(configs.size());
  if (configs.empty()) return out;
  budget.spent += configs.size();

  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  std::exception_ptr error;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= configs.size()) return;
      {
        std::lock_guard lock(error_mu);
        if (error) return;
      }
      try {
        RunResult r = executor.Run(configs[i]);
        Instance& inst = out[i];
        inst.config = configs[i];
        inst.score = r.failure ? std::nullopt : r.score;
        inst.failure = r.failure;
        inst.outcome = eval.Evaluate(inst.score);
        inst.origin = origin;
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t threads =
      std::min(std::max<std::size_t>(executor.workers(), 1), configs.size());
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

SubprocessExecutor::SubprocessExecutor(Universe universe, ExecutorConfig config,
                                       std::string metric_key)
    : universe_(std::move(universe)),
      config_(std::move(config)),
      metric_key_(std::move(metric_key)) {
  if (config_.workers == 0) throw std::invalid_argument("workers must be >= 1");
  if (config_.timeout.count() <= 0) {
    throw std::invalid_argument("timeout must be positive");
  }
  IgnoreSigpipeOnce();
  std::vector<std::string> names = {"PATH"};
  names.insert(names.end(), config_.env_passthrough.begin(),
               config_.env_passthrough.end());
  for (const std::string& name : names) {
    if (const char* v = std::getenv(name.c_str())) {
      std::string entry = name + "=" + v;
      if (std::find(env_.begin(), env_.end(), entry) == env_.end()) {
        env_.push_back(std::move(entry));
      }
    }
  }
}

RunResult SubprocessExecutor::Run(const Configuration& config) {
  const std::string input = ConfigurationToJson(universe_, config).dump() + "\n";
  ChildStatus child = RunChild(config_.command, env_, input, config_.timeout);
  RunResult result;
  if (child.timed_out) {
    result.failure = FailureKind::kTimeout;
    result.detail = "timed out";
    return result;
  }
  if (WIFEXITED(child.wait_status)) {
    const int code = WEXITSTATUS(child.wait_status);
    if (code == 126 || code == 127) {
      throw ExecutorError("command could not be run (exit " +
                          std::to_string(code) + "): " + config_.command +
                          (child.err.empty() ? "" : ": " + child.err));
    }
    if (code != 0) {
      result.failure = FailureKind::kCrash;
      result.detail = "exit status " + std::to_string(code);
      return result;
    }
    return ParseChildOutput(child.out, metric_key_);
  }
  result.failure = FailureKind::kCrash;
  result.detail = WIFSIGNALED(child.wait_status)
                      ? "killed by signal " +
                            std::to_string(WTERMSIG(child.wait_status))
                      : "abnormal termination";
  return result;
}

}  // namespace pipedebug

#pragma once

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "devo/errors.hpp"
#include "devo/search_space.hpp"

namespace devo::objectives {

struct ExternalEvaluatorConfig {
    std::vector<std::string> command;  // argv, command[0] resolved via PATH
    double timeout_s = 600.0;          // per-evaluation reply deadline
};

/// Drives a child process that scores genomes over a line-delimited JSON
/// protocol: one request object {"genome":[...],"seed":N} per line on its
/// stdin, one reply object {"fitness":X} per line on its stdout.
///
/// The child is spawned lazily on first use and kept alive across
/// evaluations. Any protocol violation, timeout, or premature exit kills the
/// child (a fresh one is spawned on the next call) and throws a subclass of
/// EvaluatorFailure.
class ExternalEvaluator {
public:
    explicit ExternalEvaluator(ExternalEvaluatorConfig cfg) : cfg_(std::move(cfg)) {
        if (cfg_.command.empty())
            throw ConfigError("external evaluator: empty command");
        if (!(cfg_.timeout_s > 0.0))
            throw ConfigError("external evaluator: timeout must be positive");
        // A dead child makes write() raise SIGPIPE; we want EPIPE instead.
        ::signal(SIGPIPE, SIG_IGN);
    }

    ExternalEvaluator(const ExternalEvaluator&) = delete;
    ExternalEvaluator& operator=(const ExternalEvaluator&) = delete;

    ~ExternalEvaluator() { shutdown(); }

    bool running() const { return pid_ > 0; }

    double evaluate(const Genome& genome, std::uint64_t seed) {
        if (!running()) spawn();

        nlohmann::json req;
        req["genome"] = genome;
        req["seed"] = seed;
        std::string line = req.dump();
        line.push_back('\n');
        write_all(line);

        const std::string reply = read_line(cfg_.timeout_s);
        nlohmann::json parsed;
        try {
            parsed = nlohmann::json::parse(reply);
        } catch (const nlohmann::json::exception& e) {
            fail();
            throw ProtocolError("external evaluator: unparseable reply: " + reply);
        }
        if (!parsed.is_object() || parsed.size() != 1 || !parsed.contains("fitness") ||
            !parsed["fitness"].is_number()) {
            fail();
            throw ProtocolError("external evaluator: reply must be {\"fitness\": <number>}, got: " +
                                reply);
        }
        return parsed["fitness"].get<double>();
    }

private:
    void spawn() {
        int to_child[2];
        int from_child[2];
        if (::pipe(to_child) != 0 || ::pipe(from_child) != 0)
            throw IoError("external evaluator: pipe() failed");

        pid_t pid = ::fork();
        if (pid < 0) throw IoError("external evaluator: fork() failed");
        if (pid == 0) {
            ::dup2(to_child[0], STDIN_FILENO);
            ::dup2(from_child[1], STDOUT_FILENO);
            ::close(to_child[0]);
            ::close(to_child[1]);
            ::close(from_child[0]);
            ::close(from_child[1]);
            std::vector<char*> argv;
            argv.reserve(cfg_.command.size() + 1);
            for (const std::string& a : cfg_.command)
                argv.push_back(const_cast<char*>(a.c_str()));
            argv.push_back(nullptr);
            ::execvp(argv[0], argv.data());
            ::_exit(127);
        }
        ::close(to_child[0]);
        ::close(from_child[1]);
        pid_ = pid;
        to_child_ = to_child[1];
        from_child_ = from_child[0];
        buffer_.clear();
    }

    void write_all(const std::string& data) {
        std::size_t off = 0;
        while (off < data.size()) {
            ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw_child_gone();
            }
            off += static_cast<std::size_t>(n);
        }
    }

    std::string read_line(double timeout_s) {
        using clock = std::chrono::steady_clock;
        const auto deadline =
            clock::now() + std::chrono::duration_cast<clock::duration>(
                               std::chrono::duration<double>(timeout_s));
        for (;;) {
            auto nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                std::string line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                return line;
            }
            const auto left = deadline - clock::now();
            const auto left_ms =
                std::chrono::duration_cast<std::chrono::milliseconds>(left).count();
            if (left_ms <= 0) {
                fail();
                throw TimeoutError("external evaluator: no reply within " +
                                   std::to_string(cfg_.timeout_s) + " s");
            }
            struct pollfd pfd{from_child_, POLLIN, 0};
            int rc = ::poll(&pfd, 1, static_cast<int>(std::min<long long>(left_ms, 1000)));
            if (rc < 0) {
                if (errno == EINTR) continue;
                fail();
                throw IoError("external evaluator: poll() failed");
            }
            if (rc == 0) continue;
            char chunk[4096];
            ssize_t n = ::read(from_child_, chunk, sizeof chunk);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw_child_gone();
            }
            if (n == 0) throw_child_gone();  // EOF: child closed stdout
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

    // Child vanished mid-conversation. Classify by exit status.
    [[noreturn]] void throw_child_gone() {
        int status = reap();
        if (WIFEXITED(status) && WEXITSTATUS(status) != 0)
            throw NonZeroExit("external evaluator: child exited with status " +
                              std::to_string(WEXITSTATUS(status)));
        if (WIFSIGNALED(status))
            throw NonZeroExit("external evaluator: child killed by signal " +
                              std::to_string(WTERMSIG(status)));
        throw ProtocolError("external evaluator: child closed the stream");
    }

    // Kill and reap without classifying; used before throwing protocol errors.
    void fail() {
        if (pid_ > 0) ::kill(pid_, SIGKILL);
        reap();
    }

    int reap() {
        int status = 0;
        if (pid_ > 0) ::waitpid(pid_, &status, 0);
        pid_ = -1;
        close_fds();
        return status;
    }

    void shutdown() {
        if (pid_ > 0) {
            ::close(to_child_);  // polite EOF first
            to_child_ = -1;
            int status = 0;
            // Give it a moment to exit on its own, then force.
            for (int i = 0; i < 50; ++i) {
                pid_t r = ::waitpid(pid_, &status, WNOHANG);
                if (r == pid_) {
                    pid_ = -1;
                    break;
                }
                ::usleep(10'000);
            }
            if (pid_ > 0) {
                ::kill(pid_, SIGKILL);
                ::waitpid(pid_, &status, 0);
                pid_ = -1;
            }
        }
        close_fds();
    }

    void close_fds() {
        if (to_child_ >= 0) ::close(to_child_);
        if (from_child_ >= 0) ::close(from_child_);
        to_child_ = -1;
        from_child_ = -1;
        buffer_.clear();
    }

    ExternalEvaluatorConfig cfg_;
    pid_t pid_ = -1;
    int to_child_ = -1;
    int from_child_ = -1;
    std::string buffer_;
};

}  // namespace devo::objectives

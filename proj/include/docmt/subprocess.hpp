#pragma once

#include <string>

namespace docmt {

// Child process run through `/bin/sh -c command` with piped stdin/stdout.
// Line oriented: the caller writes request lines and reads reply lines.
class Subprocess {
 public:
  explicit Subprocess(const std::string& command);
  ~Subprocess();

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  // False on broken pipe (child exited).
  bool write_line(const std::string& line);
  // False on EOF.
  bool read_line(std::string& line);
  void close_stdin();
  // Forces the child down (SIGKILL) so blocked pipe writers get EPIPE.
  // The child is reaped by wait() or the destructor as usual.
  void kill();
  // Reaps the child; returns its exit code, or 128+signal if killed.
  int wait();
  bool running() const { return pid_ > 0; }
  const std::string& command() const { return command_; }

 private:
  std::string command_;
  int pid_ = -1;
  int stdin_fd_ = -1;
  int stdout_fd_ = -1;
  std::string buffer_;
  bool eof_ = false;
};

}  // namespace docmt

#include <csignal>
#include <iostream>
#include <pthread.h>
#include <string>
#include <thread>
#include <vector>

#include "cli.hpp"

int main(int argc, char** argv) {
  // Block termination signals in every thread and handle them on a
  // dedicated one, so `serve` shuts down cleanly.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  std::thread watcher([signals] {
    int received = 0;
    sigwait(&signals, &received);
    cdcoach::cli::stopServing();
    if (cdcoach::cli::servingPort() < 0) std::_Exit(128 + received);
  });
  watcher.detach();

  std::vector<std::string> args(argv, argv + argc);
  const int code = cdcoach::cli::run(args, std::cout, std::cerr);
  std::cout.flush();
  return code;
}

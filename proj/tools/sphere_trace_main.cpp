#include <iostream>

#include "sphere_trace/runner.hpp"

int main(int argc, char** argv) {
  return sphere_trace::main_entry(argc, argv, std::cout, std::cerr);
}

// SPDX-License-Identifier: MIT
#include <iostream>

#include "bandctl/cli/app.hpp"

int main(int argc, char** argv) { return bandctl::cli::dispatch(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "fakerev/app.hpp"

int main(int argc, char** argv) { return fakerev::app::run_cli(argc, argv, std::cout, std::cerr); }

#include <iostream>

#include "icerank/app.hpp"

int main(int argc, char** argv) {
    return icerank::app::run(argc, argv, std::cout, std::cerr);
}

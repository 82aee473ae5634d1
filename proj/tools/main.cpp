#include "cli.hpp"

int main(int argc, char** argv) {
    return geospread::cli::run(argc, argv);
}

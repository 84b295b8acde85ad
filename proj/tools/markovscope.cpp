#include "markovscope/cli.hpp"

int main(int argc, char** argv) {
    return markovscope::run_cli(argc, argv);
}

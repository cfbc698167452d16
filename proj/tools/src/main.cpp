#include "app.hpp"

int main(int argc, char** argv) { return hwm::cli::run(argc, argv); }

#include "workbench/commands.hpp"

int main(int argc, char** argv) { return qode::workbench::run_cli(argc, argv); }

#include "cli_app.hpp"

int main(int argc, char** argv) { return eigrestrict::app::cli_main(argc, argv); }

#include "curvflow/app.hpp"

int main(int argc, char** argv) { return curvflow::app::main(argc, argv); }

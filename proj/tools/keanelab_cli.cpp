#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "keanelab/config.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exact-arithmetic laboratory for Keane-family 4-interval exchange transformations"};
    app.set_version_flag("--version", keanelab::tool_version());

    std::string config_path;
    std::string out_dir = ".";
    std::string format = "both";
    int threads = 1;
    app.add_option("--config", config_path, "path to a JSON run configuration")->required();
    app.add_option("--out", out_dir, "directory for report files");
    app.add_option("--format", format, "report file format")->check(CLI::IsMember({"json", "csv", "both"}));
    app.add_option("--threads", threads, "worker threads for independent sub-checks")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "cannot read config file: " << config_path << "\n";
        return 1;
    }
    std::ostringstream buf;
    buf << in.rdbuf();

    try {
        const keanelab::RunConfig cfg = keanelab::parse_config(buf.str());
        return keanelab::run_command(cfg, out_dir, format, threads, std::cout);
    } catch (const keanelab::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const keanelab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

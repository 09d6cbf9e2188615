#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "cli_commands.hpp"

namespace {

using gfdm::cli::AnalyzeOptions;
using gfdm::cli::CommonOptions;

void add_common(CLI::App* cmd, CommonOptions& opt, std::string& format, std::string& arch,
                std::string& domain, bool files) {
  cmd->add_option("--config", opt.config_path, "JSON run configuration");
  if (files) {
    cmd->add_option("--in", opt.in_path, "input sample file");
    cmd->add_option("--format", format, "sample file format")
        ->check(CLI::IsMember({"bin", "csv"}));
  }
  cmd->add_option("--out", opt.out_path, files ? "output sample file" : "output path");
  cmd->add_option("--arch", arch, "modem architecture")->check(CLI::IsMember({"fft", "direct"}));
  cmd->add_option("--domain", domain, "td, fd, td_fd, td_td or fd_fd")
      ->check(CLI::IsMember({"td", "fd", "td_fd", "td_td", "fd_fd"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GFDM block modem: pulses, modulation, loopback and cost tables"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string format = "bin";
  std::string arch;
  std::string domain;

  auto* pulse = app.add_subcommand("pulse", "write the prototype pulse and its windows");
  add_common(pulse, opt, format, arch, domain, false);
  auto* mod = app.add_subcommand("modulate", "modulate a symbol file into one block");
  add_common(mod, opt, format, arch, domain, true);
  auto* demod = app.add_subcommand("demodulate", "equalize and demodulate one block");
  add_common(demod, opt, format, arch, domain, true);
  auto* loop = app.add_subcommand("loopback", "run the end-to-end chain and report NMSE, SER, CM");
  add_common(loop, opt, format, arch, domain, false);

  AnalyzeOptions aopt;
  std::vector<std::string> kind_names;
  std::string aformat = "csv";
  auto* analyze = app.add_subcommand("analyze", "complexity and latency tables");
  analyze->add_option("--N", aopt.n_values, "block sizes; every K x M split is listed")->delimiter(',');
  analyze->add_option("--K", aopt.k_values, "subcarrier counts")->delimiter(',');
  analyze->add_option("--M", aopt.m_values, "subsymbol counts")->delimiter(',');
  analyze->add_option("--kinds", kind_names, "architectures (default: all)")->delimiter(',');
  analyze->add_option("--L", aopt.L, "overlap for DIR_FD_FD_SPARSE");
  analyze->add_option("--format", aformat, "csv or text")->check(CLI::IsMember({"csv", "text"}));
  analyze->add_option("--out", aopt.out_path, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : gfdm::cli::kExitValidation;
  }

  opt.format = format == "csv" ? gfdm::SampleFormat::Csv : gfdm::SampleFormat::Binary;
  if (!arch.empty()) opt.arch = gfdm::parse_modem_arch(arch);
  if (!domain.empty()) opt.domain = gfdm::cli::parse_domain_flag(domain);

  if (*pulse) return gfdm::cli::cmd_pulse(opt, std::cout, std::cerr);
  if (*mod) return gfdm::cli::cmd_modulate(opt, std::cout, std::cerr);
  if (*demod) return gfdm::cli::cmd_demodulate(opt, std::cout, std::cerr);
  if (*loop) return gfdm::cli::cmd_loopback(opt, std::cout, std::cerr);

  for (const auto& name : kind_names) {
    const auto k = gfdm::parse_arch_kind(name);
    if (!k) {
      std::cerr << "invalid input: unknown architecture '" << name << "'\n";
      return gfdm::cli::kExitValidation;
    }
    aopt.kinds.push_back(*k);
  }
  aopt.csv = aformat == "csv";
  return gfdm::cli::cmd_analyze(aopt, std::cout, std::cerr);
}

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ktf/ktf.hpp"

namespace ktf {

enum ExitCode : int { exit_ok = 0, exit_usage = 2, exit_tolerance = 3, exit_input = 4 };

// Malformed spectral-data file; the message names the offending row (1-based, header is row 1).
class InputDataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kSpectralHeader = "t_re,t_im,a_m1_re,a_m1_im,a_m2_re,a_m2_im,norm_sq,lambda_re,lambda_im";

std::vector<SpectralDatum> load_spectral_data(const std::string& path);
std::vector<SpectralDatum> parse_spectral_data(std::istream& in);
void write_spectral_data(std::ostream& os, const std::vector<SpectralDatum>& data);

// "", "principal", an index into enumerate_characters(N), or a label as printed by label()
DirichletCharacter resolve_character(i64 N, const std::string& key);

// 15 significant digits, -0 printed as 0
std::string fmt15(double x);

// Runs one subcommand. argv[0] is the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ktf

#include "cli_config.hpp"

#include "potts/error.hpp"

#include <algorithm>
#include <fstream>

namespace potts::cli {

namespace {

std::string trim(const std::string &s)
{
  auto const first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) {
    return {};
  }
  auto const last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool given(const std::vector<std::string> &args, const std::string &flag)
{
  return std::any_of(args.begin(), args.end(), [&](const std::string &a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

} // namespace

std::vector<std::string> expand_config(const std::vector<std::string> &args)
{
  std::vector<std::string> out;
  std::string path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) {
        throw Error(Errc::InvalidArgument, "--config needs a file name");
      }
      path = args[++k];
    } else if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
    } else {
      out.push_back(args[k]);
    }
  }
  if (path.empty()) {
    return out;
  }

  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::Io, "cannot open config file '" + path + "'");
  }
  std::vector<std::string> extra;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string const text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == ';' || text[0] == '[') {
      continue;
    }
    auto const eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::InvalidArgument, "config '" + path + "' line " + std::to_string(line_no) + ": expected key=value");
    }
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    std::replace(key.begin(), key.end(), '_', '-');
    std::string const flag = "--" + key;
    if (!given(out, flag)) {
      extra.push_back(flag + "=" + value);
    }
  }
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

} // namespace potts::cli

#pragma once

#include <string>
#include <string_view>

#include "statfinder/finder.hpp"

namespace statfinder {

// Line-oriented query text shared by the CLI and the web client:
//   "<canonical object> => <integer>"   one assigned pair per line, or
//   "v1,v2,..."                         one value group per line.
// Blank lines are ignored; the two line kinds cannot be mixed. Errors carry
// the 1-based line number. The returned query uses default options.
Query parse_query_text(CollectionId collection, std::string_view text);

// Inverse of parse_query_text for the data part of a query.
std::string format_query_text(const Query& query);

}  // namespace statfinder

#include "geovec/io/osm_xml.hpp"

#include <expat.h>

#include <charconv>
#include <cstring>
#include <memory>
#include <unordered_map>

#include "geovec/error.hpp"
#include "geovec/io/csv.hpp"

namespace geovec::io {

namespace {

enum class ElementKind { None, Node, Way, Relation };

struct PendingElement {
  ElementKind kind = ElementKind::None;
  std::string id;
  Coordinate location;
  std::vector<std::string> refs;
  Tags tags;
};

struct ParseState {
  const TagFilter* filter = nullptr;
  std::unordered_map<std::string, Coordinate> node_locations;
  PendingElement current;
  FeatureCollection out;
  OsmLoadStats stats;
  std::string error;
  XML_Parser parser = nullptr;
};

const char* attribute(const XML_Char** attrs, const char* name) {
  for (int i = 0; attrs[i] != nullptr; i += 2) {
    if (std::strcmp(attrs[i], name) == 0) return attrs[i + 1];
  }
  return nullptr;
}

double parse_number(const char* text, const char* what) {
  if (text == nullptr) throw Error(ErrorKind::MalformedInput, std::string("missing ") + what);
  double v = 0.0;
  const char* end = text + std::strlen(text);
  const auto [ptr, ec] = std::from_chars(text, end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::MalformedInput, std::string("invalid ") + what + ": " + text);
  }
  return v;
}

Tags retained_tags(const Tags& tags, const TagFilter& filter) {
  Tags kept;
  for (const auto& [k, v] : tags) {
    if (filter.has_key(k)) kept.emplace(k, v);
  }
  return kept;
}

void finish_element(ParseState& st) {
  PendingElement& el = st.current;
  if (el.kind == ElementKind::Node) {
    ++st.stats.nodes;
    st.node_locations[el.id] = el.location;
    if (st.filter->matches(el.tags)) {
      st.out.add({"node/" + el.id, el.location, retained_tags(el.tags, *st.filter)});
    }
  } else if (el.kind == ElementKind::Way) {
    ++st.stats.ways;
    if (st.filter->matches(el.tags)) {
      std::vector<Coordinate> coords;
      coords.reserve(el.refs.size());
      for (const auto& ref : el.refs) {
        const auto it = st.node_locations.find(ref);
        if (it == st.node_locations.end()) {
          throw Error(ErrorKind::MalformedInput, "way " + el.id + " references missing node " + ref);
        }
        coords.push_back(it->second);
      }
      const bool closed = el.refs.size() >= 2 && el.refs.front() == el.refs.back();
      FeatureGeometry geometry;
      try {
        if (closed) {
          geometry = Polygon(std::move(coords));
        } else {
          geometry = LineString(std::move(coords));
        }
      } catch (const Error& e) {
        throw Error(ErrorKind::MalformedInput, "way " + el.id + ": " + e.detail());
      }
      st.out.add({"way/" + el.id, std::move(geometry), retained_tags(el.tags, *st.filter)});
    }
  } else if (el.kind == ElementKind::Relation) {
    ++st.stats.relations_skipped;
  }
  el = PendingElement{};
}

void start_element(ParseState& st, const char* name, const XML_Char** attrs) {
  if (std::strcmp(name, "node") == 0 || std::strcmp(name, "way") == 0 ||
      std::strcmp(name, "relation") == 0) {
    const char* id = attribute(attrs, "id");
    if (id == nullptr) throw Error(ErrorKind::MalformedInput, std::string(name) + " without id");
    st.current = PendingElement{};
    st.current.id = id;
    if (name[0] == 'n') {
      st.current.kind = ElementKind::Node;
      st.current.location = Coordinate::checked(parse_number(attribute(attrs, "lon"), "lon"),
                                                parse_number(attribute(attrs, "lat"), "lat"));
    } else if (name[0] == 'w') {
      st.current.kind = ElementKind::Way;
    } else {
      st.current.kind = ElementKind::Relation;
    }
  } else if (std::strcmp(name, "tag") == 0 && st.current.kind != ElementKind::None) {
    const char* k = attribute(attrs, "k");
    const char* v = attribute(attrs, "v");
    if (k == nullptr || v == nullptr) throw Error(ErrorKind::MalformedInput, "tag without k/v");
    st.current.tags[k] = v;
  } else if (std::strcmp(name, "nd") == 0 && st.current.kind == ElementKind::Way) {
    const char* ref = attribute(attrs, "ref");
    if (ref == nullptr) throw Error(ErrorKind::MalformedInput, "nd without ref");
    st.current.refs.emplace_back(ref);
  }
}

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
  auto& st = *static_cast<ParseState*>(data);
  if (!st.error.empty()) return;
  try {
    start_element(st, name, attrs);
  } catch (const Error& e) {
    st.error = e.detail();
    XML_StopParser(st.parser, XML_FALSE);
  } catch (const std::exception& e) {
    st.error = e.what();
    XML_StopParser(st.parser, XML_FALSE);
  }
}

void XMLCALL on_end(void* data, const XML_Char* name) {
  auto& st = *static_cast<ParseState*>(data);
  if (!st.error.empty()) return;
  if (std::strcmp(name, "node") != 0 && std::strcmp(name, "way") != 0 &&
      std::strcmp(name, "relation") != 0) {
    return;
  }
  try {
    finish_element(st);
  } catch (const Error& e) {
    st.error = e.detail();
    XML_StopParser(st.parser, XML_FALSE);
  } catch (const std::exception& e) {
    st.error = e.what();
    XML_StopParser(st.parser, XML_FALSE);
  }
}

}  // namespace

FeatureCollection parse_osm_xml(std::string_view xml, const TagFilter& filter,
                                OsmLoadStats* stats) {
  ParseState st;
  st.filter = &filter;
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreate(nullptr), &XML_ParserFree);
  if (!parser) throw Error(ErrorKind::IoFailure, "cannot allocate XML parser");
  st.parser = parser.get();
  XML_SetUserData(parser.get(), &st);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  const auto status =
      XML_Parse(parser.get(), xml.data(), static_cast<int>(xml.size()), XML_TRUE);
  if (!st.error.empty()) throw Error(ErrorKind::MalformedInput, st.error);
  if (status != XML_STATUS_OK) {
    throw Error(ErrorKind::MalformedInput,
                std::string("OSM XML parse error at line ") +
                    std::to_string(XML_GetCurrentLineNumber(parser.get())) + ": " +
                    XML_ErrorString(XML_GetErrorCode(parser.get())));
  }
  if (stats != nullptr) *stats = st.stats;
  return std::move(st.out);
}

FeatureCollection load_osm_xml(const std::string& path, const TagFilter& filter,
                               OsmLoadStats* stats) {
  return parse_osm_xml(read_file(path), filter, stats);
}

}  // namespace geovec::io

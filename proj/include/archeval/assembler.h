// Builds DOT graphs from diagram detections: node boxes carrying
// recognized text and arrows with tail and head points.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "archeval/dot.h"

namespace archeval {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct BoundingBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;
};

struct DetectedBox {
  long long id = 0;
  BoundingBox bbox;
  std::string text;
};

struct DetectedArrow {
  Point tail;
  Point head;
};

struct DetectionSet {
  std::vector<DetectedBox> boxes;
  std::vector<DetectedArrow> arrows;

  // Throws std::invalid_argument on degenerate boxes or duplicate ids.
  void validate() const;
};

struct LinkedEdge {
  long long source_box = 0;
  long long target_box = 0;

  bool operator==(const LinkedEdge&) const = default;
};

class UnlinkableArrow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AssemblyResult {
  DotGraph graph;  // canonical form
  std::size_t dropped_arrows = 0;
};

// Squared Euclidean distance from `p` to the box boundary; 0 inside.
double squared_distance(const Point& p, const BoundingBox& box);

// Head goes to the nearest box. Tail goes to its nearest box unless that is
// the head's box, in which case the second-nearest is used. Distance ties
// resolve to the lowest box id. Throws UnlinkableArrow with fewer than two
// boxes.
LinkedEdge link_arrow(const DetectedArrow& arrow,
                      const std::vector<DetectedBox>& boxes);

// One node per box (id = box id, label = text or "node_<id>" when empty),
// one edge per linkable arrow with duplicates removed, then canonicalized.
AssemblyResult assemble_dot(const DetectionSet& detections);

// Reads {"boxes":[{"id","bbox","text"}], "arrows":[{"tail","head"}]}. An
// arrow may instead list "points": [[x,y],[x,y]], read as tail then head.
// Throws std::invalid_argument on schema violations.
DetectionSet detections_from_json(const std::string& json_text);

}  // namespace archeval

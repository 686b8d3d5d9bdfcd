#include "archeval/assembler.h"

#include <algorithm>
#include <limits>
#include <set>
#include <unordered_set>

#include "json.hpp"

namespace archeval {

namespace {

using nlohmann::json;

// Index of the box closest to `p`, skipping `excluded`; ties go to the
// lowest box id.
std::size_t nearest_box(const Point& p, const std::vector<DetectedBox>& boxes,
                        std::size_t excluded) {
  std::size_t best = excluded;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (i == excluded) continue;
    double d = squared_distance(p, boxes[i].bbox);
    if (best == excluded || d < best_d ||
        (d == best_d && boxes[i].id < boxes[best].id)) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

Point read_point(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw std::invalid_argument(std::string(what) + " must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

void DetectionSet::validate() const {
  std::unordered_set<long long> ids;
  for (const DetectedBox& b : boxes) {
    if (!(b.bbox.x0 < b.bbox.x1) || !(b.bbox.y0 < b.bbox.y1)) {
      throw std::invalid_argument("degenerate bounding box for box " +
                                  std::to_string(b.id));
    }
    if (!ids.insert(b.id).second) {
      throw std::invalid_argument("duplicate box id " + std::to_string(b.id));
    }
  }
}

double squared_distance(const Point& p, const BoundingBox& box) {
  double dx = std::max({box.x0 - p.x, 0.0, p.x - box.x1});
  double dy = std::max({box.y0 - p.y, 0.0, p.y - box.y1});
  return dx * dx + dy * dy;
}

LinkedEdge link_arrow(const DetectedArrow& arrow,
                      const std::vector<DetectedBox>& boxes) {
  if (boxes.size() < 2) {
    throw UnlinkableArrow("linking an arrow needs at least two boxes");
  }
  const std::size_t none = boxes.size();
  std::size_t target = nearest_box(arrow.head, boxes, none);
  std::size_t source = nearest_box(arrow.tail, boxes, target);
  return {boxes[source].id, boxes[target].id};
}

AssemblyResult assemble_dot(const DetectionSet& detections) {
  detections.validate();
  DotGraph graph;
  for (const DetectedBox& b : detections.boxes) {
    std::string id = std::to_string(b.id);
    graph.nodes.push_back(
        {id, b.text.empty() ? "node_" + id : b.text, {}});
  }
  AssemblyResult out;
  std::set<std::pair<long long, long long>> seen;
  for (const DetectedArrow& a : detections.arrows) {
    try {
      LinkedEdge e = link_arrow(a, detections.boxes);
      if (seen.emplace(e.source_box, e.target_box).second) {
        graph.edges.push_back(
            {std::to_string(e.source_box), std::to_string(e.target_box), {}});
      }
    } catch (const UnlinkableArrow&) {
      ++out.dropped_arrows;
    }
  }
  out.graph = canonicalize(graph);
  return out;
}

DetectionSet detections_from_json(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed detections JSON: ") +
                                e.what());
  }
  if (!doc.is_object()) {
    throw std::invalid_argument("detections must be a JSON object");
  }
  DetectionSet out;
  for (const json& b : doc.value("boxes", json::array())) {
    if (!b.is_object() || !b.contains("id") || !b["id"].is_number_integer() ||
        !b.contains("bbox") || !b["bbox"].is_array() || b["bbox"].size() != 4) {
      throw std::invalid_argument(
          "each box needs an integer id and a 4-element bbox");
    }
    DetectedBox box;
    box.id = b["id"].get<long long>();
    const json& bb = b["bbox"];
    for (const json& v : bb) {
      if (!v.is_number()) throw std::invalid_argument("bbox must be numeric");
    }
    box.bbox = {bb[0].get<double>(), bb[1].get<double>(), bb[2].get<double>(),
                bb[3].get<double>()};
    if (b.contains("text")) {
      if (!b["text"].is_string()) {
        throw std::invalid_argument("box text must be a string");
      }
      box.text = b["text"].get<std::string>();
    }
    out.boxes.push_back(std::move(box));
  }
  for (const json& a : doc.value("arrows", json::array())) {
    if (!a.is_object()) throw std::invalid_argument("arrow must be an object");
    DetectedArrow arrow;
    if (a.contains("tail") && a.contains("head")) {
      arrow.tail = read_point(a["tail"], "tail");
      arrow.head = read_point(a["head"], "head");
    } else if (a.contains("points") && a["points"].is_array() &&
               a["points"].size() == 2) {
      arrow.tail = read_point(a["points"][0], "points[0]");
      arrow.head = read_point(a["points"][1], "points[1]");
    } else {
      throw std::invalid_argument(
          "arrow needs tail and head, or a two-element points list");
    }
    out.arrows.push_back(arrow);
  }
  out.validate();
  return out;
}

}  // namespace archeval

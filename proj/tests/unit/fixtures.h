#pragma once

#include "dsf/instance.h"

namespace fixtures {

// s→v→t, costs 1,1; pair (s,t).
inline dsf::Instance path3() {
  dsf::InstanceBuilder b;
  b.edge("s", "v", 1, "sv");
  b.edge("v", "t", 1, "vt");
  b.pair("s", "t", "st");
  return b.build();
}

// a→r:1, r→b:1, r→c:2; pairs (a,b), (a,c). The hub r is declared first so
// it holds the smallest vertex id.
inline dsf::Instance triangle() {
  dsf::InstanceBuilder b;
  b.vertex("r");
  b.edge("a", "r", 1, "ar");
  b.edge("r", "b", 1, "rb");
  b.edge("r", "c", 2, "rc");
  b.pair("a", "b", "ab");
  b.pair("a", "c", "ac");
  return b.build();
}

// r→v (5), v→t1 (1), v→t2 (1), r→t1 (7), r→t2 (7).
inline dsf::Instance shared_prefix() {
  dsf::InstanceBuilder b;
  b.edge("r", "v", 5, "rv");
  b.edge("v", "t1", 1, "vt1");
  b.edge("v", "t2", 1, "vt2");
  b.edge("r", "t1", 7, "rt1");
  b.edge("r", "t2", 7, "rt2");
  b.pair("r", "t1", "p1");
  b.pair("r", "t2", "p2");
  return b.build();
}

inline dsf::VertexId vid(const dsf::Instance& inst, const char* name) {
  return *inst.find_vertex_by_name(name);
}
inline dsf::EdgeId eid(const dsf::Instance& inst, const char* name) {
  return *inst.find_edge_by_name(name);
}
inline dsf::PairId pid(const dsf::Instance& inst, const char* name) {
  return *inst.find_pair_by_name(name);
}

}  // namespace fixtures

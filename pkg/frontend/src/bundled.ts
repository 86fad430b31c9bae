// Copies of the group files shipped with the backend package, so the
// picker works without a file round-trip. Keep in sync with
// src/varorbit/data/groups/.
import type { GroupFile } from "./groups";

export const BUNDLED_GROUPS: Record<string, GroupFile> = {
  "figure-eight": {
    name: "figure-eight",
    n: 3,
    d: 2,
    alpha: 1.0,
    masses: [0.3333333333333333, 0.3333333333333333, 0.3333333333333333],
    action_type: "dihedral",
    kernel_generators: [],
    generators: {
      h0: { perm: [1, 3, 2], mat: [[1, 0], [0, -1]] },
      h1: { perm: [2, 1, 3], mat: [[-1, 0], [0, 1]] },
    },
    l: 12,
  },
  "two-body-choreography": {
    name: "two-body-choreography",
    n: 2,
    d: 2,
    alpha: 1.0,
    masses: [0.5, 0.5],
    action_type: "cyclic",
    kernel_generators: [],
    generators: { r: { perm: [2, 1], mat: [[1, 0], [0, 1]] } },
    l: 2,
  },
  "brake-three-body": {
    name: "brake-three-body",
    n: 3,
    d: 2,
    alpha: 1.0,
    masses: [0.3333333333333333, 0.3333333333333333, 0.3333333333333333],
    action_type: "brake",
    kernel_generators: [
      { perm: [2, 3, 1], mat: [[-0.5, -0.8660254037844386], [0.8660254037844386, -0.5]] },
    ],
    generators: { h0: { perm: [1, 3, 2], mat: [[1, 0], [0, -1]] } },
    l: 2,
  },
  "trivial-2body": {
    name: "trivial-2body",
    n: 2,
    d: 2,
    alpha: 1.0,
    masses: [0.5, 0.5],
    action_type: "cyclic",
    kernel_generators: [],
    generators: {},
    l: 1,
  },
};

// Client-side validation of group definition files, mirroring the server
// schema so a malformed file shows a field-level error before any request.
import { z } from "zod";

const spatial = z.object({
  perm: z.array(z.number().int().min(1)).min(1),
  mat: z.array(z.array(z.number())),
});

export const groupSchema = z
  .object({
    name: z.string().optional(),
    n: z.number().int().min(1),
    d: z.number().int().min(1),
    alpha: z.number().positive().optional(),
    masses: z.array(z.number().positive()).min(1),
    action_type: z.enum(["cyclic", "brake", "dihedral"]),
    l: z.number().int().min(1),
    kernel_generators: z.array(spatial).optional(),
    generators: z
      .object({ r: spatial.optional(), h0: spatial.optional(), h1: spatial.optional() })
      .optional(),
  })
  .superRefine((g, ctx) => {
    if (g.masses.length !== g.n)
      ctx.addIssue({ code: "custom", path: ["masses"], message: `expected ${g.n} masses` });
    const gens = g.generators ?? {};
    if (g.action_type === "cyclic" && g.l > 1 && !gens.r)
      ctx.addIssue({ code: "custom", path: ["generators", "r"], message: "cyclic l > 1 requires r" });
    if (g.action_type === "brake" && !gens.h0)
      ctx.addIssue({ code: "custom", path: ["generators", "h0"], message: "brake requires h0" });
    if (g.action_type === "dihedral" && (!gens.h0 || !gens.h1))
      ctx.addIssue({ code: "custom", path: ["generators"], message: "dihedral requires h0 and h1" });
    const entries: [string[], z.infer<typeof spatial> | undefined][] = [
      [["generators", "r"], gens.r],
      [["generators", "h0"], gens.h0],
      [["generators", "h1"], gens.h1],
      ...(g.kernel_generators ?? []).map(
        (s, i): [string[], z.infer<typeof spatial>] => [["kernel_generators", String(i)], s],
      ),
    ];
    for (const [path, s] of entries) {
      if (!s) continue;
      if (s.perm.length !== g.n)
        ctx.addIssue({ code: "custom", path: [...path, "perm"], message: `perm must have ${g.n} entries` });
      if (s.mat.length !== g.d || s.mat.some((row) => row.length !== g.d))
        ctx.addIssue({ code: "custom", path: [...path, "mat"], message: `mat must be ${g.d}x${g.d}` });
    }
  });

export type GroupFile = z.infer<typeof groupSchema>;

export interface ValidationResult {
  ok: boolean;
  group?: GroupFile;
  errors: string[]; // "path: message" lines for the picker UI
}

export function validateGroupText(text: string): ValidationResult {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch (e) {
    return { ok: false, errors: [`json: ${(e as Error).message}`] };
  }
  const parsed = groupSchema.safeParse(data);
  if (!parsed.success) {
    return {
      ok: false,
      errors: parsed.error.issues.map((i) => `${i.path.join(".") || "(root)"}: ${i.message}`),
    };
  }
  return { ok: true, group: parsed.data, errors: [] };
}

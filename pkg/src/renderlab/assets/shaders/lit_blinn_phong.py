# Blinn-Phong program with optional albedo texture and shadow-map visibility.
#
# color = albedo * (ka + kd * max(N.L, 0) * vis) * lightColor
#       + ks * max(N.H, 0) ** (32 * glossiness) * vis * lightColor
# H = normalize(L + V); the specular term is gated on N.L > 0; ``vis`` is the
# 3x3 percentage-closer-filtered shadow factor (1 when no shadow map bound).

BINDINGS = (
    "view_proj", "camera_pos", "light_dir_to", "light_color",
    "base_color", "ambient", "diffuse", "specular", "glossiness",
    "albedo_tex", "shadow_map", "shadow_view_proj", "shadow_bias_base",
)


def vertex(vin, u):
    world = transform_points(vin["model"], vin["position"])
    normal = transform_dirs(vin["normal_mat"], vin["normal"])
    return {
        "position": project(u["view_proj"], world),
        "world_pos": world,
        "normal": normal,
        "uv": vin["uv"],
    }


def _shadow_visibility(world_pos, ndl, u):
    shadow = u["shadow_map"]
    clip = project(u["shadow_view_proj"], world_pos)
    ndc = clip[:, :3] / clip[:, 3:4]
    s = (ndc[:, 0] + 1.0) * 0.5
    t = (1.0 - ndc[:, 1]) * 0.5
    depth = ndc[:, 2]

    ndl_c = np.maximum(ndl[:, 0], 0.05)
    slope = np.sqrt(np.maximum(1.0 - ndl_c * ndl_c, 0.0)) / ndl_c
    base = u["shadow_bias_base"]
    bias = np.minimum(base * (1.0 + slope), base * 10.0)

    w, h = shadow.width, shadow.height
    px = np.floor(s * w).astype(np.int64)
    py = np.floor(t * h).astype(np.int64)
    total = np.zeros(len(depth), dtype=np.float32)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            stored = shadow.fetch_depth(px + dx, py + dy)
            total += (depth - bias <= stored).astype(np.float32)
    visibility = total / 9.0
    outside = (s < 0.0) | (s > 1.0) | (t < 0.0) | (t > 1.0) | (depth < 0.0) | (depth > 1.0)
    return np.where(outside, 1.0, visibility)[:, None].astype(np.float32)


def fragment(fin, u):
    n = normalize(fin["normal"])
    l = u["light_dir_to"][None, :]
    v = normalize(u["camera_pos"][None, :] - fin["world_pos"])
    ndl = np.maximum(vdot(n, l), 0.0)
    h = normalize(l + v)
    ndh = np.maximum(vdot(n, h), 0.0)
    spec = u["specular"] * np.where(ndl > 0.0, ndh ** (32.0 * u["glossiness"]), 0.0)

    albedo = np.ones((len(n), 3), dtype=np.float32) * u["base_color"][None, :3]
    tex = u.get("albedo_tex")
    if tex is not None:
        albedo = albedo * tex.sample2d(fin["uv"])[:, :3]

    visibility = np.ones_like(ndl)
    if u.get("shadow_map") is not None:
        visibility = _shadow_visibility(fin["world_pos"], ndl, u)

    light = u["light_color"][None, :]
    rgb = albedo * (u["ambient"] + u["diffuse"] * ndl * visibility) * light
    rgb = rgb + spec * visibility * light
    alpha = np.ones((len(n), 1), dtype=np.float32)
    return np.concatenate([saturate(rgb), alpha], axis=1)

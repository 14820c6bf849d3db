const t = /\s+/g;
const u = x / 2;

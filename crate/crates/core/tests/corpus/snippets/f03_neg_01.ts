const o = {};
for (const k in o) {
}

#!/usr/bin/env node
// Prints npm's minVersion for each range on stdin (one per line) as JSON.
// Usage: node tools/semver-oracle.js < ranges.txt > crates/core/tests/fixtures/semver_min_versions.json
const path = require('path');

function load() {
  try {
    return path.dirname(require.resolve('semver/package.json'));
  } catch (_) {
    const root = require('child_process').execSync('npm root -g').toString().trim();
    return path.join(root, 'npm', 'node_modules', 'semver');
  }
}

const dir = load();
const semver = require(dir);
const version = require(path.join(dir, 'package.json')).version;
const input = require('fs').readFileSync(0, 'utf8');
const ranges = input.split('\n');
if (ranges[ranges.length - 1] === '') ranges.pop();

const out = ranges.map((range) => {
  let min = null;
  try {
    const v = semver.minVersion(range);
    if (v) min = `${v.major}.${v.minor}.${v.patch}`;
  } catch (_) {}
  return { range, min };
});
console.log(JSON.stringify({ oracle: `semver@${version}`, ranges: out }, null, 1));

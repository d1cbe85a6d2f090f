let z: unknown[] | undefined;
const g = () => (z ||= []);

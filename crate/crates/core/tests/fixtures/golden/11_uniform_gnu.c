int
max_of (int a, int b)
{
  if (a > b)
    {
      return a;
    }
  return b;
}
